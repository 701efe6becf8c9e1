"""
Geometry of spacelike general helices in Minkowski 3-space.
"""
