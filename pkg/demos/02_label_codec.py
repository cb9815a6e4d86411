"""Pointer labels, compound tags, mask templates, and beam decoding.

Run with:  python3 demos/02_label_codec.py
"""

import numpy as np

from gecedit import (
    ModifyItem,
    Reference,
    Switch,
    attention_scores,
    beam_decode_permutation,
    build_mask_template,
    decode_instance,
    encode_instance,
    fill_template,
    pointers_to_permutation,
    switch_to_pointers,
)

# --- a permutation in next-character-pointer form --------------------------

pointers = switch_to_pointers(3, Switch((2, 0, 1)))
print("first:", pointers.first, " next:", pointers.next, " (END sentinel = 3)")
print("back to a permutation:", pointers_to_permutation(pointers))

# --- a growing modification becomes M / MI_t tags --------------------------

src = "AXXE"
reference = Reference(modifies=(ModifyItem(1, 2, "YYY"),))
labels = encode_instance(src, reference)
print("tags: ", [str(t) for t in labels.tags.tags], " fills:", labels.tags.fills)

template = build_mask_template(src, labels.tags)
print("template parts:", ["_" if p is None else p for p in template.parts])
print("filled:", fill_template(template, labels.tags.fills))
print("decode_instance:", decode_instance(src, labels))

# --- scoring a reorder with attention, then beam-decoding it ---------------

# Scaled dot-product attention; with d=1 and Q=K=[[1],[0]] the first row
# prefers itself 0.73 / 0.27 and the second row is uniform.
print(np.round(attention_scores([[1.0], [0.0]], [[1.0], [0.0]]), 4))

# A next-character score matrix for n=3 characters (rows/cols 3 = BOS,
# 4 = EOS); the strongest chain here is 2 -> 0 -> 1.
scores = np.array(
    [
        [0.05, 0.80, 0.05, 0.05, 0.05],
        [0.05, 0.05, 0.10, 0.05, 0.75],
        [0.85, 0.05, 0.05, 0.00, 0.05],
        [0.10, 0.10, 0.70, 0.05, 0.05],
        [0.20, 0.20, 0.20, 0.20, 0.20],
    ]
)
print("beam decode:", beam_decode_permutation(scores, beam_width=5))
