"""Pin vertices of optimal odd cycle transversals via tight odd cycle cuts."""

from octcuts.graph_core import Graph, TwoColoring, two_coloring, components

__all__ = ["Graph", "TwoColoring", "two_coloring", "components"]
