"""Module entry point: python -m pospart."""

from .cli import console_main

console_main()
