"""Global evaluator: runs checked choreographies directly.

Values are not located; the per-role structure shows up in the variable
stores (a variable of a type located at R lives in R's store), the per-role
console transcripts, and the observation function used by the differential
harness. Channels are passive: ``com`` returns its payload relocated,
``select`` returns its label. Role-permuted instantiation rebinds the formal
roles of the constructed object, which is all the mergesort-style role
rotation needs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import surface as S
from .builtins import Builtins, Console, PrintStreamV, java_div, java_rem, value_equals
from .projector import generated_name
from .runtime import (
    UNIT, ChoreoRuntimeError, EnumV, ExceptionV, ListV, OptionalV, is_unit,
)
from .types import TVar, reduce_type, roles_of_type, spine


class GlobalChannel:
    """Passive channel value: com relocates, select echoes."""

    def __init__(self, key="<anonymous>"):
        self.key = key

    def com(self, message=UNIT):
        return message

    def select(self, label=UNIT):
        return label


@dataclass
class GlobalObject:
    info: object  # DeclInfo
    binding: dict  # formal role name -> actual role name
    fields: dict = field(default_factory=dict)

    def formal_for_actual(self, actual):
        for formal, act in self.binding.items():
            if act == actual:
                return formal
        return None


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class _Thrown(Exception):
    def __init__(self, value):
        self.value = value


@dataclass
class Frame:
    """One activation: role binding, per-role variable stores, this."""

    info: object
    binding: dict
    this: GlobalObject = None
    stores: dict = field(default_factory=dict)  # actual role -> {name: value}
    var_roles: dict = field(default_factory=dict)  # name -> actual role tuple

    def declare(self, name, actual_roles, value):
        roles = tuple(sorted(actual_roles)) or ("<nowhere>",)
        self.var_roles[name] = roles
        for r in roles:
            self.stores.setdefault(r, {})[name] = value

    def assign(self, name, value):
        for r in self.var_roles[name]:
            self.stores[r][name] = value

    def lookup(self, name):
        roles = self.var_roles.get(name)
        if roles is None:
            return None, False
        # Read from every store the variable lives in; isolation by keying.
        value = self.stores[roles[0]][name]
        return value, True


@dataclass
class ExecutionReport:
    returns: dict
    transcripts: dict
    duration: float
    status: str  # "ok" | "deadlock-timeout" | "error"
    error: str = None


class GlobalInterpreter:
    def __init__(self, checked):
        self.checked = checked
        self.table = checked.table
        self.console = Console()
        self.channels = {}
        self.builtins = Builtins(
            self.console,
            invoke=lambda recv, m, args: self.invoke_dynamic(recv, m, args),
            claim_channel=self.global_channel,
        )

    # ------------------------------------------------------------- channels

    def global_channel(self, key):
        if key not in self.channels:
            self.channels[key] = GlobalChannel(key)
        return self.channels[key]

    # ------------------------------------------------------------ plumbing

    def actual_roles_of_type(self, t, binding):
        return {binding[r] for r in roles_of_type(t) if r in binding}

    def find_method(self, info, name, arity, binding, statics_ok=True):
        """(MethodInfo, owner binding) via the supertype closure.

        Dynamic dispatch needs an implementation, so signature-only members
        (interface/abstract declarations) are skipped.
        """
        checker = self.checked._checker
        for (sup, submap), _ in checker.closure_with_subst(info):
            for mi in sup.methods:
                if mi.name != name or len(mi.node.params) != arity:
                    continue
                if mi.node.body is None:
                    continue
                if not statics_ok and mi.is_static:
                    continue
                sup_binding = self.super_binding(sup, submap, binding)
                return mi, sup_binding
        return None, None

    def super_binding(self, sup, submap, binding):
        if not submap:
            return dict(binding)
        out = {}
        for formal in sup.role_vars:
            arg = submap.get(formal.uid, formal)
            if isinstance(arg, TVar):
                out[formal.name] = binding.get(arg.name, arg.name)
        return out

    # ------------------------------------------------------------ execution

    def call_method(self, obj: GlobalObject, mi, args, binding=None):
        binding = binding if binding is not None else obj.binding
        frame = Frame(mi.owner, binding, this=obj)
        scope_types = self._param_types(mi)
        for p, t, v in zip(mi.node.params, scope_types, args):
            frame.declare(p.name, self.actual_roles_of_type(t, binding), v)
        try:
            self.exec_stm(frame, mi.node.body)
        except _Return as r:
            return r.value
        return UNIT

    def _param_types(self, mi):
        checker = self.checked._checker
        scope = checker.method_scope(mi.owner, mi)
        out = []
        for p in mi.node.params:
            t = checker.denote(p.te, scope)
            out.append(reduce_type(t))
        return out

    def construct(self, info, actual_roles, ctor_mi, args):
        binding = {v.name: a for v, a in zip(info.role_vars, actual_roles)}
        obj = GlobalObject(info, binding)
        if ctor_mi is not None and ctor_mi.node.body is not None:
            self.call_method(obj, ctor_mi, args)
        return obj

    # ------------------------------------------------------------ statements

    def exec_stm(self, frame, stm):
        while stm is not None:
            if isinstance(stm, S.Nil):
                return
            if isinstance(stm, S.Return):
                raise _Return(self.eval(frame, stm.value) if stm.value is not None else UNIT)
            if isinstance(stm, S.ExpStm):
                self.eval(frame, stm.exp)
            elif isinstance(stm, S.VarDecl):
                t = self.checked.var_tes.get(id(stm))
                roles = self.actual_roles_of_type(t, frame.binding) if t is not None else set()
                value = self.eval(frame, stm.init) if stm.init is not None else UNIT
                frame.declare(stm.name, roles, value)
            elif isinstance(stm, S.Assign):
                value = self.eval(frame, stm.value)
                if stm.op != "=":
                    current = self.eval(frame, stm.target)
                    value = self.binary_value(stm.op[:-1], current, value)
                self.assign_to(frame, stm.target, value)
            elif isinstance(stm, S.If):
                branch = stm.then if self.eval(frame, stm.guard) is True else stm.orelse
                self.exec_stm(frame, branch)
            elif isinstance(stm, S.Block):
                self.exec_stm(frame, stm.body)
            elif isinstance(stm, S.Switch):
                self.exec_switch(frame, stm)
            elif isinstance(stm, S.TryCatch):
                self.exec_try(frame, stm)
            else:
                raise ChoreoRuntimeError(f"cannot execute {stm!r}")
            stm = getattr(stm, "cont", None)

    def exec_switch(self, frame, stm):
        guard = self.eval(frame, stm.guard)
        if not isinstance(guard, EnumV):
            raise ChoreoRuntimeError("switch guard must be an enumerated value")
        for c in stm.cases:
            if c.label == guard.case:
                self.exec_stm(frame, c.body)
                return
        if stm.default is not None:
            self.exec_stm(frame, stm.default)

    def exec_try(self, frame, stm):
        from .builtins import exception_matches

        try:
            self.exec_stm(frame, stm.body)
        except _Thrown as t:
            for h in stm.handlers:
                if exception_matches(t.value, h.te.name):
                    roles = self.actual_roles_of_type(
                        self.checked.te_type(h.te), frame.binding)
                    frame.declare(h.name, roles, t.value)
                    self.exec_stm(frame, h.body)
                    return
            raise

    def assign_to(self, frame, target, value):
        if isinstance(target, S.Name):
            _, found = frame.lookup(target.ident)
            if found:
                frame.assign(target.ident, value)
                return
            if frame.this is not None:
                frame.this.fields[target.ident] = value
                return
            raise ChoreoRuntimeError(f"cannot assign unknown name '{target.ident}'")
        if isinstance(target, S.FieldAcc):
            scope = self.eval(frame, target.scope)
            if isinstance(scope, GlobalObject):
                scope.fields[target.name] = value
                return
        raise ChoreoRuntimeError("unsupported assignment target")

    # ----------------------------------------------------------- expressions

    def eval(self, frame, exp):
        if isinstance(exp, S.Literal):
            if exp.value is None:
                return None
            return exp.value
        if isinstance(exp, S.Name):
            if exp.ident == "this":
                return frame.this
            value, found = frame.lookup(exp.ident)
            if found:
                return value
            if frame.this is not None and exp.ident in frame.this.fields:
                return frame.this.fields[exp.ident]
            raise ChoreoRuntimeError(f"unbound name '{exp.ident}'")
        if isinstance(exp, S.FieldAcc):
            return self.eval_field(frame, exp)
        if isinstance(exp, S.Call):
            return self.eval_call(frame, exp)
        if isinstance(exp, S.New):
            return self.eval_new(frame, exp)
        if isinstance(exp, S.Binary):
            return self.eval_binary(frame, exp)
        raise ChoreoRuntimeError(f"cannot evaluate {exp!r}")

    def eval_field(self, frame, exp):
        if isinstance(exp.scope, S.StaticRef):
            info = self.table.get(exp.scope.name)
            if info is not None and info.is_enum and exp.name in info.node.cases:
                return EnumV(info.name, exp.name)
            if exp.scope.name == "System" and exp.name == "out":
                actual = frame.binding[exp.scope.roles[0]]
                return PrintStreamV(self.console, actual)
            raise ChoreoRuntimeError(
                f"unknown static field '{exp.scope.name}.{exp.name}'")
        scope = self.eval(frame, exp.scope)
        if isinstance(scope, GlobalObject):
            if exp.name in scope.fields:
                return scope.fields[exp.name]
            raise ChoreoRuntimeError(
                f"object of '{scope.info.name}' has no field '{exp.name}' yet")
        raise ChoreoRuntimeError(f"no field '{exp.name}' on {scope!r}")

    def eval_call(self, frame, exp):
        args = [self.eval(frame, a) for a in exp.args]
        resolved = self.checked.resolved.get(id(exp))
        if exp.scope is None:
            if exp.name == "super":
                mi = resolved[1]
                sup_binding = self._super_ctor_binding(frame, mi)
                self.call_method(frame.this, mi, args, binding=sup_binding)
                return UNIT
            mi = resolved[1] if resolved else None
            if mi is None:
                raise ChoreoRuntimeError(f"unresolved call '{exp.name}'")
            if mi.is_static:
                return self.call_static(mi, frame.binding, args)
            return self.invoke_object(frame.this, exp.name, len(args), args,
                                      prefer=mi)
        if isinstance(exp.scope, S.StaticRef):
            actual_roles = [frame.binding[r] for r in exp.scope.roles]
            hit, value = self.builtins.try_static_call(exp.scope.name, exp.name, args)
            if hit:
                return value
            info = self.table.get(exp.scope.name)
            mi = resolved[1] if resolved else None
            if info is None or mi is None:
                raise ChoreoRuntimeError(
                    f"unknown static call '{exp.scope.name}.{exp.name}'")
            binding = {v.name: a for v, a in zip(info.role_vars, actual_roles)}
            return self.call_static(mi, binding, args, owner=info)
        receiver = self.eval(frame, exp.scope)
        return self.invoke_dynamic(receiver, exp.name, args)

    def _super_ctor_binding(self, frame, mi):
        node = frame.this.info.node
        t = self.checked.te_type(node.extends)
        head, targs = spine(reduce_type(t))
        sup = mi.owner
        binding = {}
        i = 0
        for a in targs:
            if isinstance(a, TVar) and a.role:
                formal = sup.role_vars[i]
                binding[formal.name] = frame.this.binding.get(a.name, a.name)
                i += 1
            if i >= len(sup.role_vars):
                break
        return binding

    def call_static(self, mi, binding, args, owner=None):
        owner = owner if owner is not None else mi.owner
        if mi.node.body is None:
            raise ChoreoRuntimeError(
                f"builtin static '{owner.name}.{mi.name}' is not implemented by "
                f"the runtime")
        frame = Frame(owner, binding, this=None)
        for p, t in zip(mi.node.params, self._param_types(mi)):
            roles = self.actual_roles_of_type(t, binding)
            frame.declare(p.name, roles, args.pop(0) if args else UNIT)
        try:
            self.exec_stm(frame, mi.node.body)
        except _Return as r:
            return r.value
        return UNIT

    def invoke_object(self, obj, name, arity, args, prefer=None):
        mi, binding = self.find_method(obj.info, name, arity, obj.binding)
        if mi is None:
            raise ChoreoRuntimeError(f"'{obj.info.name}' has no method '{name}/{arity}'")
        return self.call_method(obj, mi, args, binding=binding)

    def invoke_dynamic(self, receiver, name, args):
        if isinstance(receiver, GlobalObject):
            return self.invoke_object(receiver, name, len(args), args)
        hit, value = self.builtins.try_call_method(receiver, name, args)
        if hit:
            return value
        raise ChoreoRuntimeError(f"no method '{name}' on {receiver!r}")

    def eval_new(self, frame, exp):
        args = [self.eval(frame, a) for a in exp.args]
        hit, value = self.builtins.construct(exp.class_name, args)
        if hit:
            return value
        info = self.table.get(exp.class_name)
        if info is None:
            raise ChoreoRuntimeError(f"unknown class '{exp.class_name}'")
        actual_roles = [frame.binding[r] for r in exp.roles]
        resolved = self.checked.resolved.get(id(exp))
        ctor = resolved[1] if resolved else None
        return self.construct(info, actual_roles, ctor, args)

    def eval_binary(self, frame, exp):
        left = self.eval(frame, exp.left)
        if exp.op in ("&&", "||"):
            if exp.op == "&&":
                return self.eval(frame, exp.right) if left is True else False
            return True if left is True else self.eval(frame, exp.right)
        right = self.eval(frame, exp.right)
        return self.binary_value(exp.op, left, right)

    @staticmethod
    def binary_value(op, left, right):
        if op == "==":
            return value_equals(left, right)
        if op == "!=":
            return not value_equals(left, right)
        if is_unit(left) or is_unit(right):
            return UNIT
        if op in ("&", "|"):
            return (left and right) if op == "&" else (left or right)
        if op == "+" and isinstance(left, str):
            return left + right
        if op == "/" and isinstance(left, int) and not isinstance(left, bool):
            return java_div(left, right)
        if op == "%" and isinstance(left, int) and not isinstance(left, bool):
            return java_rem(left, right)
        table = {
            "+": lambda a, b: a + b,
            "-": lambda a, b: a - b,
            "*": lambda a, b: a * b,
            "/": lambda a, b: a / b,
            "%": lambda a, b: a % b,
            "<": lambda a, b: a < b,
            ">": lambda a, b: a > b,
            "<=": lambda a, b: a <= b,
            ">=": lambda a, b: a >= b,
        }
        return table[op](left, right)

    # ----------------------------------------------------------- observation

    def observe(self, value, role):
        """Role view of a value, comparable with a worker's observation."""
        if is_unit(value) or value is None:
            return "unit"
        if isinstance(value, bool):
            return value
        if isinstance(value, (int, float, str)):
            return value
        if isinstance(value, EnumV):
            return ("enum", value.type_name, value.case)
        if isinstance(value, ListV):
            return ["list"] + [self.observe(v, role) for v in value.items]
        if isinstance(value, OptionalV):
            return ("optional", self.observe(value.value, role) if value.present else None)
        if isinstance(value, GlobalObject):
            if len(value.info.role_names) == 1:
                # Single-role objects relocate wholesale over channels; their
                # content is visible wherever the value ends up.
                fields = {}
                for fname, v in value.fields.items():
                    obs = self.observe(v, role)
                    if obs != "unit":
                        fields[fname] = obs
                return ("object", value.info.name, tuple(sorted(fields.items())))
            formal = value.formal_for_actual(role)
            if formal is None:
                return "unit"
            name = generated_name(value.info.name, value.info.role_names, formal)
            fields = {}
            checker = self.checked._checker
            for (sup, submap), _ in checker.closure_with_subst(value.info):
                sup_binding = self.super_binding(sup, submap, value.binding)
                for f in sup.fields():
                    t = checker.denote(f.te, checker.decl_scope(sup))
                    actuals = self.actual_roles_of_type(t, sup_binding)
                    if role in actuals and f.name in value.fields:
                        obs = self.observe(value.fields[f.name], role)
                        if obs != "unit":
                            fields[f.name] = obs
            return ("object", name, tuple(sorted(fields.items())))
        if isinstance(value, GlobalChannel):
            return ("channel",)
        if isinstance(value, ExceptionV):
            return ("exception", value.class_name, value.message)
        return ("opaque", repr(value))


# --------------------------------------------------------------- entry point

def eval_global(checked, entry_class, entry_method, args_by_role=None,
                channels=None):
    """Run a choreography directly; returns an ExecutionReport.

    ``args_by_role`` lists the entry method's argument values per role in
    parameter order; ``channels`` maps constructor parameter names to
    registry keys (every channel-typed constructor parameter must appear).
    """
    args_by_role = dict(args_by_role or {})
    channels = dict(channels or {})
    interp = GlobalInterpreter(checked)
    info = checked.decl_info(entry_class)
    if info is None:
        raise ChoreoRuntimeError(f"unknown entry class '{entry_class}'")
    binding = {r: r for r in info.role_names}
    started = time.perf_counter()
    checker = checked._checker

    entry_mi = None
    for mi in info.methods:
        if mi.name == entry_method:
            entry_mi = mi
            break
    if entry_mi is None:
        raise ChoreoRuntimeError(f"'{entry_class}' has no method '{entry_method}'")

    try:
        if entry_mi.is_static:
            receiver = None
        else:
            ctor = info.constructors[0]
            ctor_args = []
            for p, t in zip(ctor.node.params, interp._param_types(ctor)):
                if p.name in channels:
                    ctor_args.append(interp.global_channel(channels[p.name]))
                else:
                    ctor_args.append(UNIT)
            receiver = interp.construct(info, info.role_names, ctor, ctor_args)

        pending = {r: list(vs) for r, vs in args_by_role.items()}
        call_args = []
        for p, t in zip(entry_mi.node.params, interp._param_types(entry_mi)):
            roles = sorted(interp.actual_roles_of_type(t, binding))
            if len(roles) == 1 and pending.get(roles[0]):
                call_args.append(decode_value(pending[roles[0]].pop(0)))
            elif p.name in channels:
                call_args.append(interp.global_channel(channels[p.name]))
            else:
                call_args.append(UNIT)

        if entry_mi.is_static:
            result = interp.call_static(entry_mi, binding, call_args, owner=info)
        else:
            result = interp.call_method(receiver, entry_mi, call_args)
        ret_t = checker.denote(entry_mi.node.return_te,
                               checker.method_scope(info, entry_mi))
        ret_roles = interp.actual_roles_of_type(reduce_type(ret_t), binding) \
            if ret_t is not None else set()
        returns = {}
        for role in info.role_names:
            returns[role] = interp.observe(result, role) if role in ret_roles else "unit"
        status, error = "ok", None
    except ChoreoRuntimeError as e:
        returns = {}
        status, error = "error", str(e)
    duration = time.perf_counter() - started
    return ExecutionReport(returns, interp.console.transcripts(), duration, status, error)


def decode_value(raw):
    """JSON manifest literal -> runtime value."""
    if isinstance(raw, list):
        return ListV([decode_value(v) for v in raw])
    return raw
