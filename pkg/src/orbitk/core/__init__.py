"""Core domain modules for orbitk."""
