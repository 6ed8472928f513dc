"""
ffheat
Fast-forward protocol simulator for the heat equation on an expanding box.
"""

__version__ = "0.1.0"
