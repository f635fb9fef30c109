"""Single-excitation Jaynes-Cummings-Hubbard dynamics on Apollonian networks."""

__version__ = "0.1.0"
