"""Rule sets describing expected verifier outcomes."""
