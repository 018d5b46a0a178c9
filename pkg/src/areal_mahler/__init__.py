"""Mahler measure and its areal (Bergman space) analog."""
