"""orbitk: orbits, loops and sweeps of the iterated maps phi_k."""

__version__ = "0.1.0"
