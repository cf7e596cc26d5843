"""Merging of projected branches and the unit-normalising rewrite.

Merging is the partial operator that reconciles the per-role projections of
alternative branches: equal atoms merge to themselves, composite statements
merge componentwise on matching shapes, and switches merge by uniting their
cases (shared labels merge bodies, unshared labels pass through). The
normaliser removes effect-free unit residue first, so that dropped code on
one side merges with a blank on the other.
"""

from __future__ import annotations

from .local import (
    LAssign, LBinary, LBlock, LCall, LExpStm, LFieldAcc, LIf, LLit, LName,
    LNew, LNil, LReturn, LStaticName, LSwitch, LThrow, LTryCatch, LUnit,
    LUnitCall, LVarDecl,
)


class MergeError(Exception):
    """Branches are not reconcilable at this role."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__("irreconcilable branch fragments")


# ------------------------------------------------------------- normaliser

def is_noop(exp):
    """Discardable as a statement: Unit.id, identifier paths, this, null."""
    if isinstance(exp, LUnit):
        return True
    if isinstance(exp, LName):
        return True
    if isinstance(exp, LStaticName):
        return True
    if isinstance(exp, LLit) and exp.value is None:
        return True
    if isinstance(exp, LFieldAcc):
        return is_noop(exp.scope)
    return False


def normalize_exp(exp):
    if exp is None:
        return None
    if isinstance(exp, (LUnit, LLit, LName, LStaticName)):
        return exp
    if isinstance(exp, LFieldAcc):
        return LFieldAcc(normalize_exp(exp.scope), exp.name)
    if isinstance(exp, LBinary):
        return LBinary(normalize_exp(exp.left), exp.op, normalize_exp(exp.right))
    if isinstance(exp, LCall):
        return LCall(normalize_exp(exp.scope), exp.type_args, exp.name,
                     [normalize_exp(a) for a in exp.args])
    if isinstance(exp, LNew):
        return LNew(exp.class_name, exp.type_args, [normalize_exp(a) for a in exp.args])
    if isinstance(exp, LUnitCall):
        args = [normalize_exp(a) for a in exp.args]
        if len(args) == 1:
            # Unit.id(E) collapses to E outright; the carried value is the
            # payload, which is exactly what nested com chains rely on.
            return args[0]
        effectful = [a for a in args if not is_noop(a)]
        if not effectful:
            return LUnit()
        if len(effectful) == 1:
            return effectful[0]
        return LUnitCall(effectful)
    raise TypeError(f"normalize_exp: {exp!r}")


def normalize_stm(stm):
    if stm is None:
        return None
    if isinstance(stm, LNil):
        return LNil()
    if isinstance(stm, LReturn):
        return LReturn(normalize_exp(stm.value))
    if isinstance(stm, LThrow):
        return LThrow(stm.message)
    if isinstance(stm, LExpStm):
        exp = normalize_exp(stm.exp)
        cont = normalize_stm(stm.cont)
        if is_noop(exp):
            return cont
        return LExpStm(exp, cont)
    if isinstance(stm, LVarDecl):
        return LVarDecl(stm.te, stm.name, normalize_exp(stm.init), normalize_stm(stm.cont))
    if isinstance(stm, LAssign):
        return LAssign(normalize_exp(stm.target), stm.op, normalize_exp(stm.value),
                       normalize_stm(stm.cont))
    if isinstance(stm, LIf):
        return LIf(normalize_exp(stm.guard), normalize_stm(stm.then),
                   normalize_stm(stm.orelse), normalize_stm(stm.cont))
    if isinstance(stm, LBlock):
        return LBlock(normalize_stm(stm.body), normalize_stm(stm.cont))
    if isinstance(stm, LSwitch):
        return LSwitch(
            normalize_exp(stm.guard),
            [(label, normalize_stm(body)) for label, body in stm.cases],
            normalize_stm(stm.default),
            normalize_stm(stm.cont),
        )
    if isinstance(stm, LTryCatch):
        return LTryCatch(
            normalize_stm(stm.body),
            [(te, name, normalize_stm(body)) for te, name, body in stm.handlers],
            normalize_stm(stm.cont),
        )
    raise TypeError(f"normalize_stm: {stm!r}")


# ---------------------------------------------------------------- merging

def merge_exp(a, b):
    if a is None and b is None:
        return None
    if a is None or b is None:
        raise MergeError(a, b)
    if a == b:
        return a
    if isinstance(a, LUnitCall) and isinstance(b, LUnitCall) and len(a.args) == len(b.args):
        return LUnitCall([merge_exp(x, y) for x, y in zip(a.args, b.args)])
    if (
        isinstance(a, LCall)
        and isinstance(b, LCall)
        and a.name == b.name
        and a.type_args == b.type_args
        and len(a.args) == len(b.args)
    ):
        scope = merge_exp(a.scope, b.scope) if (a.scope is not None or b.scope is not None) else None
        return LCall(scope, a.type_args, a.name, [merge_exp(x, y) for x, y in zip(a.args, b.args)])
    if (
        isinstance(a, LNew)
        and isinstance(b, LNew)
        and a.class_name == b.class_name
        and a.type_args == b.type_args
        and len(a.args) == len(b.args)
    ):
        return LNew(a.class_name, a.type_args, [merge_exp(x, y) for x, y in zip(a.args, b.args)])
    if isinstance(a, LBinary) and isinstance(b, LBinary) and a.op == b.op:
        return LBinary(merge_exp(a.left, b.left), a.op, merge_exp(a.right, b.right))
    if isinstance(a, LFieldAcc) and isinstance(b, LFieldAcc) and a.name == b.name:
        return LFieldAcc(merge_exp(a.scope, b.scope), a.name)
    raise MergeError(a, b)


def merge_stm(a, b):
    """The partial merge on unit-normalised statements."""
    if a is None and b is None:
        return None
    if a is None or b is None:
        raise MergeError(a, b)
    if isinstance(a, LNil) and isinstance(b, LNil):
        return LNil()
    if isinstance(a, LReturn) and isinstance(b, LReturn):
        return LReturn(merge_exp(a.value, b.value))
    if isinstance(a, LThrow) and isinstance(b, LThrow) and a.message == b.message:
        return LThrow(a.message)
    if isinstance(a, LExpStm) and isinstance(b, LExpStm):
        return LExpStm(merge_exp(a.exp, b.exp), merge_stm(a.cont, b.cont))
    if (
        isinstance(a, LVarDecl)
        and isinstance(b, LVarDecl)
        and a.te == b.te
        and a.name == b.name
    ):
        return LVarDecl(a.te, a.name, merge_exp(a.init, b.init), merge_stm(a.cont, b.cont))
    if isinstance(a, LAssign) and isinstance(b, LAssign) and a.op == b.op:
        return LAssign(merge_exp(a.target, b.target), a.op,
                       merge_exp(a.value, b.value), merge_stm(a.cont, b.cont))
    if isinstance(a, LIf) and isinstance(b, LIf):
        return LIf(merge_exp(a.guard, b.guard), merge_stm(a.then, b.then),
                   merge_stm(a.orelse, b.orelse), merge_stm(a.cont, b.cont))
    if isinstance(a, LBlock) and isinstance(b, LBlock):
        return LBlock(merge_stm(a.body, b.body), merge_stm(a.cont, b.cont))
    if isinstance(a, LSwitch) and isinstance(b, LSwitch):
        guard = merge_exp(a.guard, b.guard)
        blabels = {label: body for label, body in b.cases}
        alabels = {label for label, _ in a.cases}
        cases = []
        for label, body in a.cases:
            if label in blabels:
                cases.append((label, merge_stm(body, blabels[label])))
            else:
                cases.append((label, body))
        for label, body in b.cases:
            if label not in alabels:
                cases.append((label, body))
        if a.default is not None and b.default is not None:
            default = merge_stm(a.default, b.default)
        else:
            default = a.default if a.default is not None else b.default
        return LSwitch(guard, cases, default, merge_stm(a.cont, b.cont))
    if (
        isinstance(a, LTryCatch)
        and isinstance(b, LTryCatch)
        and len(a.handlers) == len(b.handlers)
    ):
        handlers = []
        for (te1, n1, s1), (te2, n2, s2) in zip(a.handlers, b.handlers):
            if te1 != te2 or n1 != n2:
                raise MergeError(a, b)
            handlers.append((te1, n1, merge_stm(s1, s2)))
        return LTryCatch(merge_stm(a.body, b.body), handlers, merge_stm(a.cont, b.cont))
    raise MergeError(a, b)


def big_merge(stms):
    """Normalise each statement and fold the merge across the list."""
    stms = [normalize_stm(s) for s in stms]
    if not stms:
        return LNil()
    acc = stms[0]
    for s in stms[1:]:
        acc = merge_stm(acc, s)
    return acc
