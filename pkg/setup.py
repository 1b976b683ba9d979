from setuptools import setup, find_packages

dev_requires = ['flake8', 'pytest']
install_requires = ['numpy', 'scipy', 'matplotlib']

setup(
    description="limit cones, flag-manifold boundaries and radial/horospherical limit points for discrete subgroups of SL(d, R)",
    license="Apache2",
    keywords="anosov limit-cone hilbert-geometry flag-manifold",
    name="anosov-limits",
    version="0.1.0",
    packages=find_packages(exclude=["*.tests", "*.tests.*", "tests.*", "tests"]),
    extras_require={
        'dev': dev_requires
    },
    install_requires=install_requires,
    entry_points={
        'console_scripts': [
            'anosov-limits = anosovlimits.limitsrun:main',
        ],
    }
)
