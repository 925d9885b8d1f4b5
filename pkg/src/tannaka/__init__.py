"""Exact Tannaka reconstruction of bialgebroids and Hopf algebroids."""
