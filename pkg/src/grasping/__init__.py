"""Grasp candidates, features, metrics and the four grasp experiments."""
