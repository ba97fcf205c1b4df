"""
Geometry, unfolding and search calculations
"""
