"""Crank-Nicolson (Cayley) propagation of the 1D Schroedinger equation."""
