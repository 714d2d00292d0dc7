"""Input documents and the polynomial grammar.

A document is one JSON object describing a ring and what to compute
over it.  Polynomials are strings in a small grammar: ^ for powers,
an explicit * for every product, + - / and parentheses, integer
literals, no implicit multiplication.  Parse errors carry column
positions.  The emitter writes presentations back in the same
grammar, and parsing an emitted document reproduces the presentation
up to canonical form.

Document keys (all polynomial values are strings):

    characteristic   the prime p; required unless fixture is given
    field            {"degree": e, "modulus": [c0, .., 1],
                     "generator": name} for F_{p^e}; optional, the
                     default is the prime field
    variables        base field variable names, required
    generators       ring generator names; default T, or T1, T2, ..
    series_variable  uniformizer name; default S
    ring             {"relations": [poly, ..], "precision": n or
                     [n, ..]}, or {"hypersurface": poly,
                     "point_factor": poly, "generator": name,
                     "precision": n}
    x                the variable whose roots are adjoined; default
                     is the first variable
    step2            {"variables": [alias, ..], "ring": {..}}, a
                     presentation over the once-extended base field,
                     optional
    analyses         subset of ["invariants", "normalize",
                     "jacobian", "verify"]; optional bookkeeping
    precision, cap   positive integer overrides; optional
    fixture          a corpus label such as "fam1-p3-n2", replacing
                     characteristic, variables and ring

Integer literals reduce modulo p, so characteristic consistency is
automatic: every polynomial in a document is read over the single
declared coefficient field.
"""

import itertools
import math
from dataclasses import dataclass, field as _field

from .ffield import FiniteField
from .basefield import RationalField, KPoly
from .series import TruncatedSeries
from .localring import LocalRingPresentation, hensel_prepare, \
    check_presentation


class DocumentError(ValueError):
    """A schema violation or a polynomial parse error."""


ANALYSES = ("invariants", "normalize", "jacobian", "verify")

DEFAULT_HENSEL_PREC = 16


# ---------------------------------------------------------------- grammar

def _tokens(text: str, names):
    """(kind, text, column) triples; names are matched longest first,
    so variable names may contain characters the grammar also uses."""
    ordered = sorted(names, key=len, reverse=True)
    out = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        hit = next((nm for nm in ordered if text.startswith(nm, i)), None)
        if hit is not None:
            out.append(("name", hit, i))
            i += len(hit)
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            out.append((ch, ch, i))
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in "+-*/^()":
            j += 1
        raise DocumentError(
            f"column {i + 1}: unknown name {text[i:j]!r}")
    out.append(("end", "", n))
    return out


class _Parser:
    """Recursive descent over dict polynomials.

    Values are {exponent tuple: base field element} over the slots
    listed in env; env maps each name either to a slot index or to a
    constant of the base field.  Division requires a constant divisor,
    which keeps every parsed object a genuine polynomial in the ring
    variables with field coefficients.
    """

    def __init__(self, text, env, nslots, K):
        self.toks = _tokens(text, env)
        self.env = env
        self.nslots = nslots
        self.K = K
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, what):
        kind, text, col = self.peek()
        got = "end of input" if kind == "end" else repr(text)
        raise DocumentError(f"column {col + 1}: expected {what}, got {got}")

    def parse(self):
        val = self.expr()
        if self.peek()[0] != "end":
            self.fail("an operator")
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            val = self.add(val, self.neg(rhs) if op == "-" else rhs)
        return val

    def term(self):
        val = self.factor()
        while self.peek()[0] in "*/":
            op, _, col = self.take()
            rhs = self.factor()
            if op == "*":
                val = self.mul(val, rhs)
            else:
                if len(rhs) != 1 or any(next(iter(rhs))):
                    raise DocumentError(
                        f"column {col + 1}: divisor must be a constant")
                c = next(iter(rhs.values()))
                val = {a: v / c for a, v in val.items()}
        return val

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return self.neg(self.factor())
        val = self.atom()
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] != "int":
                self.fail("a nonnegative integer exponent")
            n = int(self.take()[1])
            val = self.pow(val, n)
        return val

    def atom(self):
        kind, text, col = self.peek()
        if kind == "int":
            self.take()
            return self.const(self.K.from_int(int(text)))
        if kind == "name":
            self.take()
            slot = self.env[text]
            if isinstance(slot, int):
                e = tuple(1 if j == slot else 0
                          for j in range(self.nslots))
                return {e: self.K.one()}
            return self.const(slot)
        if kind == "(":
            self.take()
            val = self.expr()
            if self.peek()[0] != ")":
                self.fail("a closing parenthesis")
            self.take()
            return val
        self.fail("a factor")

    # dict polynomial arithmetic

    def const(self, c):
        if c.is_zero():
            return {}
        return {(0,) * self.nslots: c}

    def add(self, a, b):
        out = dict(a)
        for e, c in b.items():
            s = out[e] + c if e in out else c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return out

    def neg(self, a):
        return {e: -c for e, c in a.items()}

    def mul(self, a, b):
        out = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out[e] + c1 * c2 if e in out else c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return out

    def pow(self, a, n):
        out = self.const(self.K.one())
        for _ in range(n):
            out = self.mul(out, a)
        return out


def parse_polynomial(text, K, slot_names, consts=None):
    """The dict polynomial {exps: coefficient} the string describes.

    slot_names get one exponent slot each, in order; base field
    variables and the entries of consts evaluate to coefficients.
    """
    env = {nm: i for i, nm in enumerate(slot_names)}
    for i, nm in enumerate(K.names):
        env.setdefault(nm, K.gen(i))
    for nm, c in (consts or {}).items():
        env.setdefault(nm, c)
    return _Parser(text, env, len(slot_names), K).parse()


# ------------------------------------------------------------- documents

@dataclass
class InputDocument:
    characteristic: int
    variables: list
    ring_spec: dict
    field_degree: int = 1
    field_modulus: tuple = None
    field_generator: str = "w"
    generators: list = None
    series_variable: str = "S"
    x_name: str = None
    step2_spec: dict = None
    analyses: tuple = ()
    precision: int = None
    cap: int = None
    fixture: str = None


_KEYS = {"characteristic", "field", "variables", "generators",
         "series_variable", "ring", "x", "step2", "analyses",
         "precision", "cap", "fixture"}


def _require(cond, msg):
    if not cond:
        raise DocumentError(msg)


def load_document(obj) -> InputDocument:
    """Validate a parsed JSON object against the schema."""
    _require(isinstance(obj, dict), "document must be a JSON object")
    unknown = set(obj) - _KEYS
    _require(not unknown, f"unknown document keys: {sorted(unknown)}")

    fixture = obj.get("fixture")
    if fixture is not None:
        _require(isinstance(fixture, str), "fixture must be a label string")
        extra = set(obj) & {"characteristic", "variables", "ring", "field",
                            "generators", "step2"}
        _require(not extra,
                 f"fixture documents must not also give {sorted(extra)}")

    analyses = obj.get("analyses", [])
    _require(isinstance(analyses, list)
             and all(a in ANALYSES for a in analyses),
             f"analyses must be a list drawn from {list(ANALYSES)}")

    for key in ("precision", "cap"):
        if key in obj:
            _require(isinstance(obj[key], int) and obj[key] > 0,
                     f"{key} must be a positive integer")

    if fixture is not None:
        return InputDocument(
            characteristic=None, variables=None, ring_spec=None,
            fixture=fixture, analyses=tuple(analyses),
            precision=obj.get("precision"), cap=obj.get("cap"),
            x_name=obj.get("x"))

    p = obj.get("characteristic")
    _require(isinstance(p, int) and p >= 2, "characteristic is required")
    variables = obj.get("variables")
    _require(isinstance(variables, list) and variables
             and all(isinstance(v, str) and v for v in variables),
             "variables must be a nonempty list of names")
    _require(len(set(variables)) == len(variables),
             "variable names must be distinct")

    fdeg, fmod, fgen = 1, None, "w"
    fspec = obj.get("field")
    if fspec is not None:
        _require(isinstance(fspec, dict), "field must be an object")
        _require(set(fspec) <= {"degree", "modulus", "generator"},
                 "field takes degree, modulus and generator")
        fdeg = fspec.get("degree", 1)
        _require(isinstance(fdeg, int) and fdeg >= 1,
                 "field degree must be a positive integer")
        if "modulus" in fspec:
            m = fspec["modulus"]
            _require(isinstance(m, list) and all(isinstance(c, int)
                                                 for c in m),
                     "field modulus must be a list of integers")
            fmod = tuple(m)
        fgen = fspec.get("generator", "w")
        _require(isinstance(fgen, str) and fgen, "field generator name")

    ring = obj.get("ring")
    _require(isinstance(ring, dict), "ring is required")
    by_rel = "relations" in ring
    by_hyp = "hypersurface" in ring
    _require(by_rel != by_hyp,
             "ring needs exactly one of relations or hypersurface")
    if by_rel:
        _require(set(ring) <= {"relations", "precision"},
                 "relation rings take relations and precision")
        rels = ring["relations"]
        _require(isinstance(rels, list) and rels
                 and all(isinstance(r, str) for r in rels),
                 "relations must be a nonempty list of strings")
        if "precision" in ring:
            pr = ring["precision"]
            ok = (isinstance(pr, int) and pr > 0) or (
                isinstance(pr, list) and len(pr) == len(rels)
                and all(v is None or (isinstance(v, int) and v > 0)
                        for v in pr))
            _require(ok, "ring precision must be a positive integer or "
                         "one entry per relation, null meaning exact")
    else:
        _require(set(ring) <= {"hypersurface", "point_factor",
                               "generator", "precision"},
                 "hypersurface rings take hypersurface, point_factor, "
                 "generator and precision")
        _require(isinstance(ring.get("hypersurface"), str)
                 and isinstance(ring.get("point_factor"), str),
                 "hypersurface and point_factor must be strings")

    generators = obj.get("generators")
    if generators is not None:
        _require(isinstance(generators, list)
                 and all(isinstance(g, str) and g for g in generators),
                 "generators must be a list of names")

    sname = obj.get("series_variable", "S")
    _require(isinstance(sname, str) and sname, "series_variable name")

    x_name = obj.get("x", variables[0])
    _require(x_name in variables, f"x must be one of {variables}")

    step2 = obj.get("step2")
    if step2 is not None:
        _require(isinstance(step2, dict)
                 and set(step2) <= {"variables", "ring", "generators"},
                 "step2 takes variables, generators and ring")
        _require(isinstance(step2.get("ring"), dict),
                 "step2 needs a ring object")
        s2v = step2.get("variables")
        _require(s2v is None or (
            isinstance(s2v, list) and len(s2v) == len(variables)),
            "step2 variables must alias the base variables one for one")

    return InputDocument(
        characteristic=p, variables=list(variables), ring_spec=dict(ring),
        field_degree=fdeg, field_modulus=fmod, field_generator=fgen,
        generators=list(generators) if generators else None,
        series_variable=sname, x_name=x_name,
        step2_spec=step2, analyses=tuple(analyses),
        precision=obj.get("precision"), cap=obj.get("cap"))


def build_base(doc: InputDocument) -> RationalField:
    try:
        F = FiniteField(doc.characteristic, doc.field_degree,
                        doc.field_modulus)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    return RationalField(F, doc.variables)


def _consts(doc, K):
    if doc.field_degree > 1:
        return {doc.field_generator: K.from_coeff(K.coeff_field.gen())}
    return {}


def _prec_list(pr, count):
    if pr is None:
        return [math.inf] * count
    if isinstance(pr, int):
        return [pr] * count
    return [math.inf if v is None else v for v in pr]


def _series_split(poly, nT, K, prec=math.inf):
    """dict polynomial over (T.., S) -> {T exps: series in S}."""
    levels = {}
    for e, c in poly.items():
        levels.setdefault(e[:nT], {})[e[nT]] = c
    return {a: TruncatedSeries(K, d, prec) for a, d in levels.items()}


def _tail_support(rel, i, degs, prec, K):
    """Apply a finite relation precision to the parsed terms.

    The precision statement covers every coefficient of the relation,
    so tails the string does not mention are zero series at O(S^prec)
    rather than exact zeros, and the whole reduced monomial box is
    filled in.  The monic lead stays exact, as the presentation
    contract demands.  degs holds the lead degrees of the relations
    up to and including this one.
    """
    if prec == math.inf:
        return rel
    nslots = len(degs)
    d = degs[i]
    monic = tuple(d if j == i else 0 for j in range(nslots))
    out = {a: (s if a == monic else s.truncate(prec))
           for a, s in rel.items()}
    for combo in itertools.product(*[range(degs[j]) for j in range(i)],
                                   range(d)):
        a = combo + (0,) * (nslots - i - 1)
        if a not in out:
            out[a] = TruncatedSeries.zero(K, prec)
    return out


def build_ring(doc: InputDocument):
    """The presentation and the chosen x of a non-fixture document."""
    K = build_base(doc)
    K_consts = _consts(doc, K)
    spec = doc.ring_spec
    if "relations" in spec:
        texts = spec["relations"]
        gens = doc.generators or (
            ["T"] if len(texts) == 1
            else [f"T{i + 1}" for i in range(len(texts))])
        _require(len(gens) == len(texts),
                 "one generator name per relation")
        precs = _prec_list(spec.get("precision"), len(texts))
        _require(len(set(gens + [doc.series_variable] + doc.variables))
                 == len(gens) + 1 + len(doc.variables),
                 "generator, series and variable names must be distinct")
        rels = []
        degs = []
        for i, text in enumerate(texts):
            try:
                poly = parse_polynomial(
                    text, K, gens + [doc.series_variable], K_consts)
            except DocumentError as exc:
                raise DocumentError(f"relation {i + 1}: {exc}") from exc
            rel = _series_split(poly, len(gens), K)
            _require(rel and any(a[i] for a in rel),
                     f"relation {i + 1} does not involve {gens[i]}")
            degs.append(max(a[i] for a in rel))
            rels.append(_tail_support(rel, i, degs, precs[i], K))
        try:
            pres = LocalRingPresentation(K, rels, names=gens)
        except ValueError as exc:
            raise DocumentError(f"ring rejected: {exc}") from exc
    else:
        gen = spec.get("generator", "Y")
        prec = spec.get("precision", doc.precision or DEFAULT_HENSEL_PREC)
        try:
            hyp = parse_polynomial(
                spec["hypersurface"], K, [gen, doc.series_variable],
                K_consts)
            pf = parse_polynomial(spec["point_factor"], K, [gen], K_consts)
        except DocumentError as exc:
            raise DocumentError(f"hypersurface ring: {exc}") from exc
        by_deg = _series_split(hyp, 1, K)
        top = max(a[0] for a in by_deg)
        f = [by_deg.get((d,), TruncatedSeries.zero(K))
             for d in range(top + 1)]
        b = [K.zero()] * (max(a[0] for a in pf) + 1)
        for a, c in pf.items():
            b[a[0]] = c
        try:
            pres = hensel_prepare(K, f, KPoly(K, b), prec)
        except ValueError as exc:
            raise DocumentError(f"ring rejected: {exc}") from exc
    x = K.gen(doc.variables.index(doc.x_name))
    return pres, x


def build_step2(doc: InputDocument, Kp):
    """The document's step-2 presentation over the extended base Kp.

    The aliases in step2.variables stand for Kp's generators in
    order, so documents do not have to spell rooted names.
    """
    spec = doc.step2_spec
    if spec is None:
        return None
    aliases = spec.get("variables") or list(Kp.names)
    ring = spec["ring"]
    _require("relations" in ring,
             "step2 rings must be given by relations")
    texts = ring["relations"]
    gens = spec.get("generators") or (
        ["T"] if len(texts) == 1
        else [f"T{i + 1}" for i in range(len(texts))])
    precs = _prec_list(ring.get("precision"), len(texts))
    consts = {nm: Kp.gen(i) for i, nm in enumerate(aliases)}
    rels = []
    degs = []
    for i, text in enumerate(texts):
        try:
            poly = parse_polynomial(
                text, Kp, gens + [doc.series_variable or "S"], consts)
        except DocumentError as exc:
            raise DocumentError(f"step2 relation {i + 1}: {exc}") from exc
        rel = _series_split(poly, len(gens), Kp)
        _require(rel and any(a[i] for a in rel),
                 f"step2 relation {i + 1} does not involve {gens[i]}")
        degs.append(max(a[i] for a in rel))
        rels.append(_tail_support(rel, i, degs, precs[i], Kp))
    try:
        return check_presentation(Kp, rels, names=gens)
    except ValueError as exc:
        raise DocumentError(f"step2 ring rejected: {exc}") from exc


# -------------------------------------------------------------- emission

def _ffield_string(F, c, gname):
    if F.e == 1:
        return str(c), True
    parts = []
    for k, a in enumerate(c):
        if a == 0:
            continue
        if k == 0:
            parts.append(str(a))
        else:
            head = "" if a == 1 else f"{a}*"
            parts.append(f"{head}{gname}" + (f"^{k}" if k > 1 else ""))
    if not parts:
        return "0", True
    return " + ".join(parts), len(parts) == 1 and "*" not in parts[0]


def _mpoly_string(m, names, gname):
    F = m.field
    if not m.terms:
        return "0", True
    parts = []
    for e, c in sorted(m.terms.items(), key=lambda t: (sum(t[0]), t[0]),
                       reverse=True):
        cs, smpl = _ffield_string(F, c, gname)
        factors = [] if (cs == "1" and any(e)) else [
            cs if smpl else f"({cs})"]
        for nm, k in zip(names, e):
            if k:
                factors.append(nm + (f"^{k}" if k > 1 else ""))
        parts.append("*".join(factors))
    return " + ".join(parts), len(parts) == 1 and "*" not in parts[0] \
        and "^" not in parts[0]


def scalar_string(c, gname="w"):
    """A base field element in the document grammar."""
    names = c.field.names
    F = c.field.coeff_field
    ns, natom = _mpoly_string(c.num, names, gname)
    if c.den.terms == {(0,) * c.den.nvars: F.one()}:
        return ns, natom
    ds, datom = _mpoly_string(c.den, names, gname)
    ns = ns if natom else f"({ns})"
    ds = ds if datom else f"({ds})"
    return f"{ns}/{ds}", False


def relation_string(rel, gen_names, series_name, gname="w"):
    """One relation dict as a polynomial string, largest lead first."""
    parts = []
    for a, srs in sorted(rel.items(), reverse=True):
        for k, c in sorted(srs.coeffs.items()):
            cs, atom = scalar_string(c, gname)
            factors = []
            if cs != "1" or (not any(a) and k == 0):
                factors.append(cs if atom else f"({cs})")
            for nm, e in zip(gen_names, a):
                if e:
                    factors.append(nm + (f"^{e}" if e > 1 else ""))
            if k:
                factors.append(series_name + (f"^{k}" if k > 1 else ""))
            parts.append("*".join(factors))
    return " + ".join(parts) if parts else "0"


def emit_presentation(pres, x=None, gname="w") -> dict:
    """A document reproducing pres; the inverse of build_ring."""
    K = pres.base
    F = K.coeff_field
    sname = "S"
    while sname in list(K.names) + pres.names or sname == gname:
        sname += "_"
    doc = {"characteristic": F.p, "variables": list(K.names)}
    if F.e > 1:
        doc["field"] = {"degree": F.e, "modulus": list(F.modulus),
                        "generator": gname}
    doc["generators"] = list(pres.names)
    doc["series_variable"] = sname
    rels = [relation_string(rel, pres.names, sname, gname)
            for rel in pres.relations]
    ring = {"relations": rels}
    # the monic lead is exact by contract, so the binding precision of
    # a relation is the smallest tail precision
    precs = [min((s.prec for s in rel.values() if s.prec != math.inf),
                 default=math.inf) for rel in pres.relations]
    if any(p != math.inf for p in precs):
        ring["precision"] = [None if p == math.inf else int(p)
                             for p in precs]
    doc["ring"] = ring
    if x is not None:
        names = list(K.names)
        for i, nm in enumerate(names):
            if K.gen(i) == x:
                doc["x"] = nm
                break
    return doc


def _canon_elem(c):
    return (tuple(sorted(c.num.terms.items())),
            tuple(sorted(c.den.terms.items())))


def canonical_presentation(pres):
    """A hashable form that two equal presentations share."""
    F = pres.base.coeff_field
    rels = []
    for rel in pres.relations:
        items = []
        for a, srs in sorted(rel.items()):
            prec = None if srs.prec == math.inf else int(srs.prec)
            items.append((a, tuple(sorted(
                (k, _canon_elem(c)) for k, c in srs.coeffs.items())), prec))
        rels.append(tuple(items))
    return (tuple(pres.names), tuple(pres.base.names), F.p, F.e,
            F.modulus, tuple(rels))
