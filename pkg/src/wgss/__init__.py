"""Dissipative generation of stable spin squeezing for waveguide-coupled
two-level emitters in a broadband squeezed reservoir."""

__version__ = "0.1.0"
