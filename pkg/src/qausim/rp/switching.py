"""Which coefficient pair acts in which part of the Q/R plane.

Q_f*F_b > 0 holds in the two thin wedges between the boundary line
F_b = 0 and the line q = q0; Q_f*F_b < 0 holds everywhere else. The minus
pair satisfies the "< 0" sliding inequality and drives the state back onto
F_b = 0 from inside a wedge; the plus pair spirals onto it from outside.

WEDGE_DAMPED, the default, is therefore the reverse of the literal
assignment "plus pair where Q_f*F_b > 0". Taken literally that assignment
puts the plus pair inside the wedges, where it cannot return the state to
F_b = 0, so the trajectory never slides. PRODUCT_SIGN keeps the literal
assignment for comparison runs (`switching = product_sign` in a scenario,
`--rule product_sign` in `analyze`).
"""
from enum import Enum


class Branch(Enum):
    PLUS = "plus"
    MINUS = "minus"


class SwitchingRule(Enum):
    WEDGE_DAMPED = "wedge_damped"   # minus pair where Q_f*F_b > 0
    PRODUCT_SIGN = "product_sign"   # plus pair where Q_f*F_b > 0


def branch_for(qf: float, fb: float, rule: SwitchingRule = SwitchingRule.WEDGE_DAMPED) -> Branch:
    """Active branch for a sample; a zero product always selects PLUS."""
    product = qf * fb
    if product == 0:
        return Branch.PLUS
    if rule is SwitchingRule.PRODUCT_SIGN:
        return Branch.PLUS if product > 0 else Branch.MINUS
    return Branch.MINUS if product > 0 else Branch.PLUS


def branch_for_region(region_sign: int, rule: SwitchingRule = SwitchingRule.WEDGE_DAMPED) -> Branch:
    """Branch for a given sign of Q_f*F_b (-1, 0 or +1)."""
    return branch_for(float(region_sign), 1.0, rule)
