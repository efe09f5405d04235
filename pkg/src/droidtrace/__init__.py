"""droidtrace: system-call trace pipeline for Android malware analysis.

Parses strace call-summary logs, builds normalized call/error feature
vectors, trains and selects among five classifier families, and can
replay the emulator extraction protocol against a scripted device.
"""

__version__ = "0.1.0"
