"""
Fan Case Dispatch
How a single A-fan of the flat prismatoid is grouped, keyed by
(has_up_faces, left_B_label, right_B_label). Left is the B-triangle on the
edge entering the base vertex, right the one on the edge leaving it.

rules:
    attach_right - whole fan follows the right B-triangle (split 0)
    attach_left  - whole fan follows the left B-triangle (split = fan size)
    safe_flip    - split at a tangency index chosen by safe_flip_side
"""

# =============================================================================
# FAN CASES
# =============================================================================

FAN_CASES = {
    # b inside the convex region: every A-face is a down-face
    (False, 'DOWN', 'DOWN'): {'case': 'convex_region', 'rule': 'attach_right'},
    (False, 'UP', 'DOWN'): {'case': 'convex_region_up_left', 'rule': 'attach_right'},
    (False, 'DOWN', 'UP'): {'case': 'convex_region_up_right', 'rule': 'attach_left'},
    (False, 'UP', 'UP'): {'case': 'convex_region_up_both', 'rule': 'attach_right'},
    # b on the reflex side: up-faces must be flipped across a tangent
    (True, 'DOWN', 'DOWN'): {'case': 'reflex_flip', 'rule': 'safe_flip'},
    (True, 'UP', 'DOWN'): {'case': 'reflex_joint_flip_left', 'rule': 'safe_flip'},
    (True, 'DOWN', 'UP'): {'case': 'reflex_joint_flip_right', 'rule': 'safe_flip'},
    (True, 'UP', 'UP'): {'case': 'reflex_joint_flip_both', 'rule': 'safe_flip'},
}

EMPTY_FAN_CASE = {'case': 'empty_fan', 'rule': 'none'}
