"""Offline figure rendering for floqlat CSV outputs.

Read-only consumers: these scripts never recompute dynamics, they render
the columns written by the simulator CLI (plus display-level fits and the
analytic boundary overlay).
"""

__version__ = "0.1.0"
