"""
Web Linearizer - linearizability of planar 3-webs

A command-line tool that decides whether the 3-web given by x = const,
y = const and f(x, y) = const is linearizable near a point, and integrates
and verifies its linearizations.
"""

__version__ = "0.1.0"
__author__ = "Web Linearizer"
__description__ = "CLI tool deciding the linearizability of planar 3-webs"
