"""Scenario-script layer: parser, interpreter, and command line."""

from .ast import Protocol, render
from .parser import parse
from .interpreter import execute

__all__ = ["Protocol", "parse", "render", "execute"]
