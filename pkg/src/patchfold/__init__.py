"""
Patchfold

Edge unfoldings of prismatoids and convex patches: band, petal and
spanning-tree unfoldings, the constructive petal unfolding of topless
prismatoids, overlap verification and randomized search.
"""
__version__ = '0.1.0'
