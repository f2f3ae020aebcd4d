#!/usr/bin/env python3
"""
Entry point for the hybrid Hindi to English translator.
"""

from hybrid_hindi_mt.main import main

if __name__ == "__main__":
    main()
