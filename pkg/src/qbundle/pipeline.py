"""Named check suites for finite-dimensional instances and their manifests.

An instance is a copointed factorisation (A, P, Psi, e~), optionally with a
grouplike character e of A (which makes the coalgebra side copointed by
1 (x) e).  Instances come from presets or from structure-constant payloads,
and `export_manifest` writes the latter for any preset.
"""
from __future__ import annotations

import itertools

from .scalars import ONE, Scalar, ScalarError, ScalarSyntaxError, parse_scalar
from .linalg import FinAlgebra, FinCoalgebra, FinSpace, LinearMap, tensor_space
from .report import Report
from . import factor as fac
from . import entwine as ent
from . import forms


class ManifestError(ValueError):
    """Manifest content that is well-formed JSON but unusable (exit code 2)."""


def _scalar_at(text, where):
    try:
        return parse_scalar(text)
    except ScalarSyntaxError as exc:
        raise ManifestError(f"{where}: bad scalar literal {text!r}: {exc}") from exc
    except ScalarError as exc:
        raise ManifestError(f"{where}: {exc}") from exc


# ----------------------------------------------------------------------
# instances

class Instance:
    def __init__(self, name, F, et, grouplike=None, params=None):
        self.name, self.F, self.et = name, F, et
        self.grouplike = grouplike
        self.params = dict(params or {})
        self._galois = None

    @property
    def galois(self):
        if self.et is None:
            raise ManifestError(f"{self.name} has no copoint, so there is no Galois data")
        if self._galois is None:
            self._galois = fac.galois_data(self.F, self.et)
        return self._galois


def _circle_point(point):
    if len(point) != 2:
        raise ManifestError("a circle point has two coordinates")
    return tuple(x if isinstance(x, Scalar) else _scalar_at(str(x), "point") for x in point)


def preset_instance(name, **args):
    if name == "example26":
        n = int(args.get("n", 2))
        F, et = fac.example26(n)
        q = Scalar.zeta(n)
        return Instance(f"example26-n{n}", F, et, {m: q ** m for m in range(n)}, {"n": n})
    if name == "example27":
        pt = args.get("point", ["3/5", "4/5"])
        c, s = _circle_point(pt)
        if c * c + s * s != ONE:
            raise ManifestError(f"point {pt} is not on the unit circle")
        F, et = fac.example27(c, s)
        return Instance(f"example27-{c}-{s}".replace("/", "_"), F, et, None, {"point": [str(c), str(s)]})
    if name == "quaternions":
        F = fac.quaternion_factorisation()
        return Instance("quaternions", F, None, None, {})
    if name == "s3":
        F, et = fac.smash_s3()
        return Instance("s3", F, et, {a: ONE for a in range(F.na)}, {})
    raise ManifestError(f"unknown preset {name!r}")


PRESETS = ("example26", "example27", "quaternions", "s3")


# ----------------------------------------------------------------------
# structure-constant payloads

def _alg_json(A: FinAlgebra):
    return {"labels": list(A.space.labels),
            "unit": [[i, str(c)] for i, c in sorted(A.unit().items())],
            "mult": A.structure_json()}


def _alg_from(d, where):
    space = FinSpace(d["labels"])
    n = space.dim
    mult = {(i, j): {} for i in range(n) for j in range(n)}
    for r, (i, j, k, c) in enumerate(d["mult"]):
        _check_index(space, i, j, k)
        v = _scalar_at(c, f"{where}.mult[{r}]")
        if v:
            mult[(i, j)][k] = mult[(i, j)].get(k, 0) + v
    unit = {}
    for r, (i, c) in enumerate(d["unit"]):
        _check_index(space, i)
        unit[i] = _scalar_at(c, f"{where}.unit[{r}]")
    return FinAlgebra(space, mult, unit)


def _coalg_json(C: FinCoalgebra):
    return {"labels": list(C.space.labels),
            "counit": [[i, str(c)] for i, c in sorted(C.counit.items()) if c],
            "comult": [[i, j, k, str(v)] for i, d in sorted(C.comult.items()) for (j, k), v in sorted(d.items())]}


def _coalg_from(d, where):
    space = FinSpace(d["labels"])
    comult = {i: {} for i in range(space.dim)}
    for r, (i, j, k, c) in enumerate(d["comult"]):
        _check_index(space, i, j, k)
        v = _scalar_at(c, f"{where}.comult[{r}]")
        comult[i][(j, k)] = comult[i].get((j, k), 0) + v
    counit = {}
    for r, (i, c) in enumerate(d["counit"]):
        _check_index(space, i)
        counit[i] = _scalar_at(c, f"{where}.counit[{r}]")
    return FinCoalgebra(space, comult, counit)


def _check_index(space, *idx):
    for i in idx:
        if not 0 <= i < space.dim:
            raise ManifestError(f"index {i} out of range for a space of dimension {space.dim}")


def _map_json(lm: LinearMap):
    return [[i, j, str(v)] for j, col in enumerate(lm.columns) for i, v in sorted(col.items())]


def _map_from(entries, dom, cod, where):
    cols = [dict() for _ in range(dom.dim)]
    for r, (i, j, c) in enumerate(entries):
        if not (0 <= i < cod.dim and 0 <= j < dom.dim):
            raise ManifestError(f"{where}[{r}]: matrix entry ({i}, {j}) out of range")
        v = _scalar_at(c, f"{where}[{r}]")
        if v:
            cols[j][i] = cols[j].get(i, 0) + v
    return LinearMap(dom, cod, cols)


def instance_to_payload(inst: Instance):
    F = inst.F
    out = {"A": _alg_json(F.A), "P": _alg_json(F.P), "psi": _map_json(F.psi)}
    if inst.et is not None:
        out["copoint"] = _map_json(inst.et)
    if inst.grouplike is not None:
        out["grouplike"] = [[a, str(c)] for a, c in sorted(inst.grouplike.items())]
    return out


def _grouplike_from(entries, space, where):
    out = {}
    for r, (a, c) in enumerate(entries):
        _check_index(space, a)
        out[a] = _scalar_at(c, f"{where}[{r}]")
    return out


def instance_from_payload(name, d, where="payload.structure"):
    A, P = _alg_from(d["A"], f"{where}.A"), _alg_from(d["P"], f"{where}.P")
    psi = _map_from(d["psi"], tensor_space(A.space, P.space), tensor_space(P.space, A.space), f"{where}.psi")
    F = fac.FactorisationMap(A, P, psi)
    et = _map_from(d["copoint"], A.space, P.space, f"{where}.copoint") if "copoint" in d else None
    grouplike = _grouplike_from(d["grouplike"], A.space, f"{where}.grouplike") if "grouplike" in d else None
    return Instance(name, F, et, grouplike)


def entwining_to_payload(inst: Instance):
    """Coalgebra-side payload: P, C = A^*, psi: C (x) P -> P (x) C and the copoint tensor in P (x) C."""
    E = ent.entwining_from_factorisation(inst.F)
    P, C = E.P, E.C
    np_, nc = P.dim, C.dim
    psi = []
    for c in range(nc):
        for u in range(np_):
            for (v, c2), x in sorted(E.psi(c, u).items()):
                psi.append([v * nc + c2, c * np_ + u, str(x)])
    out = {"P": _alg_json(P), "C": _coalg_json(C), "psi": psi}
    if inst.et is not None:
        out["copoint"] = [[u, c, str(x)] for (u, c), x in sorted(ent.copoint_to_tensor(inst.et).items())]
    if inst.grouplike is not None:
        out["grouplike"] = [[a, str(c)] for a, c in sorted(inst.grouplike.items())]
    return out


def instance_from_entwining(name, d, where="payload.structure"):
    """Read a coalgebra-side payload and transport it back to a factorisation."""
    P, C = _alg_from(d["P"], f"{where}.P"), _coalg_from(d["C"], f"{where}.C")
    lm = _map_from(d["psi"], tensor_space(C.space, P.space), tensor_space(P.space, C.space), f"{where}.psi")
    np_, nc = P.dim, C.dim

    def psi(c, u):
        return {divmod(k, nc): x for k, x in lm.columns[c * np_ + u].items()}
    E = ent.Entwining(P, C, psi, range(np_), range(nc), name)
    F = ent.factorisation_from_entwining(E)
    et = None
    if "copoint" in d:
        t = {}
        for r, (u, c, x) in enumerate(d["copoint"]):
            _check_index(P.space, u)
            _check_index(C.space, c)
            t[(u, c)] = _scalar_at(x, f"{where}.copoint[{r}]")
        et = ent.tensor_to_copoint(t, F.A, F.P)
    grouplike = _grouplike_from(d["grouplike"], C.space, f"{where}.grouplike") if "grouplike" in d else None
    return Instance(name, F, et, grouplike)


# ----------------------------------------------------------------------
# checks

def _expect(rep, name, value, params):
    """Compare an observed value with params["expect"] when given."""
    if "expect" in params:
        want = params["expect"]
        ok = str(value) == str(want) if not isinstance(want, bool) else bool(value) == want
        rep.add(name, ok, value, expected=want, observed=value)
    else:
        rep.add(name, True, observed=value)
    return rep


def chk_factorisation(inst, params):
    rep = fac.check_factorisation(inst.F)
    X = rep.data.pop("X", None)
    if X is not None:
        rep.data["X_dim"] = X.dim
    return rep


def chk_copoint(inst, params):
    if inst.et is None:
        rep = Report("copoint")
        rep.skip("copoint", "instance has no copoint")
        return rep
    return fac.check_copoint(inst.F, inst.et)


def chk_galois(inst, params):
    G = inst.galois
    rep = Report("galois")
    rep.extend(G.report)
    rep.data["dim_M"] = len(G.M)
    if "dim_M" in params:
        rep.add("dim_M", len(G.M) == params["dim_M"], len(G.M), expected=params["dim_M"])
    return rep


def chk_translation(inst, params):
    G = inst.galois
    if G.chi_sharp is None:
        rep = Report("translation map")
        rep.add("chi_sharp_exists", False)
        return rep
    return fac.verify_translation(G)


def chk_chi_formula(inst, params):
    """The closed formula for chi# (matrix factorisation presets only)."""
    n = inst.params.get("n")
    rep = Report("chi# formula")
    if n is None:
        rep.skip("chi_sharp_formula", "only defined for the matrix factorisation preset")
        return rep
    G = fac.action_from_copoint(inst.F, inst.et)
    rep.extend(fac.galois_identities(G, fac.example26_chi_sharp(n, G)), "formula_")
    bad = None
    for m, k, l in itertools.product(range(n), repeat=3):
        got = G.chi_of({m: ONE}, G.Q.proj_pairs({(k, l): ONE}))
        if got != fac.example26_chi_formula(n, m, k, l):
            bad = (m, k, l)
            break
    rep.add("chi_closed_form", bad is None, bad)
    return rep


def chk_round_trip(inst, params):
    G = inst.galois
    rep = Report("reconstruction from the action")
    try:
        F2, et2, G2 = fac.galois_product(G.A, G.P, G.action.map, compare=inst.F)
    except ValueError as exc:
        rep.add("galois_product", False, str(exc))
        return rep
    rep.extend(G2.report)
    rep.add("copoint_recovered", et2 == inst.et)
    return rep


def chk_cleft(inst, params):
    G = inst.galois
    rep = Report("cleft")
    found = fac.find_cleaving(G, seed=params.get("seed", 0))
    rep.add("cleaving_found", found is not None)
    if found is not None:
        phi, phi_inv = found
        rep.extend(fac.trivialisation_ops(G, phi, phi_inv))
    return rep


def chk_module_algebra(inst, params):
    rep = Report("module algebra")
    defect = fac.module_algebra_defect(inst.galois)
    return _expect(rep, "module_algebra", not defect, params)


def chk_chi_determinant(inst, params):
    rep = Report("chi determinant")
    order = params.get("order", "lex")
    T = ent.chi_group_basis(inst.F, inst.et, order)
    if T is None:
        rep.add("chi_invertible", False)
        return rep
    return _expect(rep, f"det_{order}", T.det(), params)


def chk_copoint_feasibility(inst, params):
    rep = Report("copoint feasibility")
    field = params.get("field", "Q")
    red = fac.copoint_feasibility_dim2(inst.F, field)
    rep.data["equation"] = red.equation
    _expect(rep, f"feasible_over_{field}", red.feasible, params)
    if red.feasible:
        rep.add("witness", True, observed=[[str(a), str(b)] for a, b in red.witnesses])
    elif red.certificate:
        rep.add("certificate", True, observed=red.certificate)
    return rep


def chk_duality(inst, params):
    """Transport to the coalgebra side; ``opposite`` selects the swapped dual coproduct."""
    opp = bool(params.get("opposite", False))
    rep = Report("duality")
    rep.extend(ent.duality_bridge(inst.F, inst.et, opposite=opp), "opposite_" if opp else "")
    rep.data = {}
    return rep


def _connection(inst):
    if inst.grouplike is None:
        raise ManifestError("connection checks need a grouplike character")
    F, e = inst.F, inst.grouplike
    E = ent.entwining_from_factorisation(F)
    found = fac.find_cleaving(inst.galois)
    if found is None:
        raise ValueError("no cleaving map: connection checks need a cleft instance")
    Phi = ent.cleaving_map_from_factor(F, found[0], e)
    om, pre = ent.trivial_connection(E, e, Phi)
    return E, e, om, pre


def chk_connection(inst, params):
    E, e, om, pre = _connection(inst)
    et = ent.copointed(inst.F.P, e)
    data = ent.coaction_ops(E, et)
    rep = Report("connection")
    rep.extend(pre)
    rep.extend(data.report)
    rep.extend(ent.verify_connection_form(E, et, om, M=data.M))
    lt = ent.left_theory(E, e, om, data.M)
    rep.extend(lt.report)
    rep.extend(ent.strongness_check(E, e, om, left_coaction=lt.left_coaction))
    return rep


def chk_connection_negative(inst, params):
    """A vertical perturbation of the connection must be rejected."""
    E, e, om, pre = _connection(inst)
    P = inst.F.P
    et = ent.copointed(P, e)
    target = params.get("c", 1 % E.C.dim)
    u = params.get("u", 1 % P.dim)
    vertical = forms.d_elem({u: ONE}, P)

    def bad(c):
        out = dict(om(c))
        if c == target:
            for k, x in vertical.items():
                out[k] = out.get(k, 0) + x
            out = {k: v for k, v in out.items() if v}
        return out
    r = ent.verify_connection_form(E, et, bad)
    rep = Report("connection negative control")
    rep.add("perturbation_rejected", not r.passed, detail=",".join(c.name for c in r.failures))
    first = r.failures[0] if r.failures else None
    rep.data["witness"] = (first.name, first.witness) if first else None
    return rep


def chk_entwining(inst, params):
    E = ent.entwining_from_factorisation(inst.F)
    rep = ent.check_entwining(E)
    if inst.et is not None:
        rep.extend(ent.check_copoint_tensor(E, ent.copoint_to_tensor(inst.et)))
    return rep


CHECKS = {
    "factorisation": chk_factorisation,
    "copoint": chk_copoint,
    "galois": chk_galois,
    "translation": chk_translation,
    "chi_formula": chk_chi_formula,
    "round_trip": chk_round_trip,
    "cleft": chk_cleft,
    "module_algebra": chk_module_algebra,
    "chi_determinant": chk_chi_determinant,
    "copoint_feasibility": chk_copoint_feasibility,
    "duality": chk_duality,
    "entwining": chk_entwining,
    "connection": chk_connection,
    "connection_negative": chk_connection_negative,
}

# checks that read inst.galois; it is computed once before any of them run
NEEDS_GALOIS = {"galois", "translation", "round_trip", "cleft", "module_algebra",
                "connection", "connection_negative"}


def default_checks(name, inst: Instance):
    """The check list written by `export_manifest` for each preset."""
    if name == "quaternions":
        return [{"name": "factorisation"},
                {"name": "copoint_feasibility", "params": {"field": "Q", "expect": False}},
                {"name": "copoint_feasibility", "params": {"field": "Q(i)", "expect": True}},
                {"name": "entwining"}]
    base = [{"name": "factorisation"}, {"name": "copoint"}, {"name": "galois", "params": {"dim_M": 1}},
            {"name": "translation"}, {"name": "round_trip"}, {"name": "cleft"}, {"name": "entwining"},
            {"name": "duality"}]
    if name == "example26":
        base[4:4] = [{"name": "chi_formula"}]
        base += [{"name": "connection"}, {"name": "connection_negative"}]
    if name == "example27":
        c, s = inst.params["point"]
        on_axis = s == "0"
        base += [{"name": "chi_determinant", "params": {"order": "lex", "expect": "-1"}},
                 {"name": "chi_determinant", "params": {"order": "lk", "expect": "1"}},
                 {"name": "module_algebra", "params": {"expect": on_axis}}]
    if name == "s3":
        base += [{"name": "connection"}, {"name": "connection_negative"}]
    return base


def export_manifest(name, kind="factorisation", **args):
    """Full structure-constant manifest for a preset (deterministic content)."""
    inst = preset_instance(name, **args)
    if kind == "factorisation":
        structure = instance_to_payload(inst)
    elif kind == "entwining":
        structure = entwining_to_payload(inst)
    else:
        raise ManifestError(f"presets export as factorisation or entwining, not {kind!r}")
    return {
        "kind": kind,
        "name": inst.name,
        "seed": 0,
        "payload": {"structure": structure, "source": {"preset": name, "args": args}},
        "checks": default_checks(name, inst),
    }


def load_instance(manifest):
    """Instance for a factorisation or entwining manifest."""
    kind, payload = manifest["kind"], manifest["payload"]
    name = manifest.get("name", kind)
    if "structure" in payload:
        reader = instance_from_payload if kind == "factorisation" else instance_from_entwining
        inst = reader(name, payload["structure"])
        src = payload.get("source")
        if src:
            # preset parameters (for instance n) enable the closed-form checks
            try:
                inst.params = preset_instance(src["preset"], **src.get("args", {})).params
            except (ManifestError, TypeError, ValueError):
                inst.params = {}
        return inst
    pre = payload["preset"]
    return preset_instance(pre["name"], **pre.get("args", {}))
