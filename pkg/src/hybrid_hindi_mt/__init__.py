"""
Hybrid Hindi MT - example-based, statistical and rule-based Hindi to English translation.
"""

__version__ = "0.1.0"
