"""
PNG figures of the boundary curve and the limit cone.
"""

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .common import logger  # noqa: E402


def matplotlib_config():
    matplotlib.rcParams['axes.labelsize'] = 11
    matplotlib.rcParams['legend.fontsize'] = 9
    matplotlib.rcParams['xtick.labelsize'] = 9
    matplotlib.rcParams['ytick.labelsize'] = 9
    matplotlib.rcParams['savefig.bbox'] = 'tight'


def _save(fig, path, dpi):
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    logger.info("wrote figure %s" % (path))


def plot_boundary(omega, fixed_points, path, dpi=150):
    """
    the boundary polyline in its affine chart, with the attracting fixed
    points it was built from
    """
    matplotlib_config()
    fig, ax = plt.subplots(figsize=(5, 5))
    closed = np.vstack([omega.xy, omega.xy[:1]])
    ax.plot(closed[:, 0], closed[:, 1], color='black', linewidth=0.8, label='boundary')
    if len(fixed_points):
        xy = omega.chart.to_chart(np.asarray(fixed_points))
        ax.scatter(xy[:, 0], xy[:, 1], s=4, color='tab:red', label='fixed points')
    ax.set_aspect('equal')
    ax.set_xlabel('chart x')
    ax.set_ylabel('chart y')
    ax.legend(loc='upper right')
    _save(fig, path, dpi)


def plot_cone(summary, path, dpi=150):
    """
    the sampled directions in the positive chamber, drawn in the traceless
    plane with the chamber walls at +-pi/6
    """
    matplotlib_config()
    fig, ax = plt.subplots(figsize=(5, 5))
    angles = np.asarray(summary.angles)
    norms = np.array([s.norm for s in summary.samples])
    reach = float(np.max(norms)) if len(norms) else 1.0
    for wall in (-np.pi / 6.0, np.pi / 6.0):
        ax.plot([0.0, reach * np.cos(wall)], [0.0, reach * np.sin(wall)], color='grey', linestyle='--', linewidth=0.8)
    ax.scatter(norms * np.cos(angles), norms * np.sin(angles), s=4, color='tab:blue', label='Jordan projections')
    lo, hi = summary.interval
    for edge in (lo, hi):
        ax.plot([0.0, reach * np.cos(edge)], [0.0, reach * np.sin(edge)], color='tab:orange', linewidth=1.0)
    ax.set_aspect('equal')
    ax.set_xlabel('symmetric axis')
    ax.set_ylabel('wall axis')
    ax.set_title('cone width %.3g rad' % (summary.width))
    ax.legend(loc='upper left')
    _save(fig, path, dpi)
