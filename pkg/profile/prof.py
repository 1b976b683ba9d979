#!/usr/bin/env python3

if __name__ == '__main__':
    from anosovlimits import limitsrun
    import cProfile
    import sys
    cProfile.run("limitsrun.execute(limitsrun.parse_args([sys.argv[2], '--config', sys.argv[3], '--out', './data/', '--workers', '1']))", filename=sys.argv[1])
