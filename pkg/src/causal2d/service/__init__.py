"""HTTP service wrapping the numerical core (see app.py)."""
