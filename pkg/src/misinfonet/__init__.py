"""Toolkit for discovering and characterizing misinformation-peddling web
domains from hyperlink graphs and social link-sharing behavior."""

__version__ = "0.1.0"
