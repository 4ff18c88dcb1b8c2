"""Figure scripts for ofdma-sched campaign outputs.

These scripts only re-plot numbers produced by the simulator's CSV/JSON
outputs; no statistic is recomputed here.
"""

__version__ = "0.1.0"
