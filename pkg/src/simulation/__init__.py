"""Corotational FEM, penalty contact and the parallel-jaw gripper world."""
