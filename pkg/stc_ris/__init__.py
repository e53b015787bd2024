"""Space-time coded reconfigurable intelligent surface simulator and design toolkit."""

__version__ = "1.0.0"
