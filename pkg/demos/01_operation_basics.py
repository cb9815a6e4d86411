"""A tour of the operation algebra: apply, validate, derive, normalize.

Run with:  python3 demos/01_operation_basics.py
"""

from gecedit import (
    InsertItem,
    ModifyItem,
    Reference,
    Switch,
    apply_reference,
    derive_operations,
    normalize_reference,
    op_count,
    validate_reference,
)

sentence = "ABCDE"

# --- the four operation kinds, one at a time ------------------------------

print("source:", sentence)
print("Switch [0,2,1,3,4]  ->", apply_reference(sentence, Reference(switch=Switch((0, 2, 1, 3, 4)))))
print("Delete [3]          ->", apply_reference(sentence, Reference(deletes=(3,))))
print("Insert F after 1    ->", apply_reference(sentence, Reference(inserts=(InsertItem(1, "F"),))))
print("Modify [2,3) -> F   ->", apply_reference(sentence, Reference(modifies=(ModifyItem(2, 1, "F"),))))

# Positions always refer to the ORIGINAL sentence, even under a Switch:
combined = Reference(switch=Switch((0, 2, 1, 3, 4)), deletes=(1,))
print("Switch + Delete[1]  ->", apply_reference(sentence, combined))

# --- validation reports every broken invariant ----------------------------

broken = Reference(deletes=(9,), modifies=(ModifyItem(0, 99, "X"),))
for violation in validate_reference(sentence, broken):
    print("violation:", violation)

# --- deriving labels from a (source, target) pair -------------------------

for target in ("ACBDE", "ABCE", "AYYYE"):
    src = "AXXE" if target == "AYYYE" else sentence
    r = derive_operations(src, target)
    print(f"derive({src!r}, {target!r}) = {r}  [{op_count(r)} op(s)]")

# A verbose annotation (rewriting the whole sentence) normalizes to the
# minimal form realizing the same target:
verbose = Reference(modifies=(ModifyItem(0, 5, "ABCE"),))
print("normalized:", normalize_reference(sentence, verbose))
