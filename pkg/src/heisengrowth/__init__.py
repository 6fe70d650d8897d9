"""Word metrics, growth and limit geometry for the integer Heisenberg group."""

from .group import (GeneratingSet, Generator, GroupElement, SpellingPath, balayage_area2, boost2,
                    epsilon, evaluate, inverse, load_generating_set, multiply, power, preset, wedge)

__all__ = ["GeneratingSet", "Generator", "GroupElement", "SpellingPath", "balayage_area2", "boost2",
           "epsilon", "evaluate", "inverse", "load_generating_set", "multiply", "power", "preset",
           "wedge"]
