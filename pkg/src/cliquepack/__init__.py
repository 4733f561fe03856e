"""Fractional and integral clique packings, design-based decompositions of dense
graphs, and the blow-up graphs that bound the minimum-degree threshold."""

__version__ = "0.1.0"
