#!/usr/bin/env python3
"""Point d'entrée pour le mode développement"""
import sys

from latmaj.latmaj import main

if __name__ == "__main__":
    sys.exit(main())
