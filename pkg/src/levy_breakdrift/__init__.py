"""Supremum distributions of Levy processes with a broken linear drift."""
__version__ = "0.1.0"
