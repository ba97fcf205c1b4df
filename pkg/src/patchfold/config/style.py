"""
Render Style Configuration
Palette and sizing for SVG output. B-triangles green and A-triangles yellow,
following the usual figure convention for prismatoid unfoldings.
"""

# =============================================================================
# PALETTE
# =============================================================================

FACE_FILLS = {
    'base': '#d9d9d9',
    'B': '#9fd89f',
    'A': '#f5e27a',
    'top': '#9fc5e8',
    'face': '#e6e6e6',
}

REGION_FILLS = {
    'altitude': '#cfe2f3',
    'diamond': '#f4cccc',
    'v_wedge': '#fce5cd',
}

STROKES = {
    'hinge': '#555555',
    'cut': '#000000',
    'ray': '#3d85c6',
    'witness': '#cc0000',
}

# =============================================================================
# SIZING
# =============================================================================

DEFAULT_STYLE = {
    'scale': 100.0,          # px per world unit
    'margin': 20.0,          # px
    'hinge_width': 0.6,
    'cut_width': 2.0,
    'ray_width': 1.0,
    'ray_dash': '6,4',
    'ray_length': 3.0,       # world units drawn for each altitude ray
    'region_opacity': 0.35,
    'face_opacity': 0.85,
    'witness_radius': 4.0,   # px
    'label_size': 9,
    'show_labels': False,
}
