"""Convex floating bodies and Bergman sublevel sets of tube domains."""
