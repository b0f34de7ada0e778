"""
The shared JSON document format (format tag "coarsex/1").

A space document carries: points (strings), the group (elements and a
multiplication table of indices), the action (a permutation per group
element, as an image list aligned with the points), named entourage
generator lists, bornology generator lists, and optional named maps.

Group homomorphisms and controlled objects use the same envelope with a
"kind" discriminator.
"""

import json

from .ctrl import ctrl_object
from .groups import FiniteGroup, GroupHom
from .spaces import Action, DomainError, SpaceMap, make_space

FORMAT = "coarsex/1"


class DocumentError(DomainError):
    """Malformed input document; the message names the offending location."""


def _need(doc, key, where="document"):
    if key not in doc:
        raise DocumentError("missing %r in %s" % (key, where))
    return doc[key]


def check_format(doc, where="document"):
    if _need(doc, "format", where) != FORMAT:
        raise DocumentError("unsupported format %r in %s" % (doc.get("format"), where))


def group_to_doc(group):
    index = {g: i for i, g in enumerate(group.elements)}
    return {
        "elements": list(group.elements),
        "table": [
            [index[group.mul(a, b)] for b in group.elements] for a in group.elements
        ],
    }


def group_from_doc(doc, where="group"):
    elements = _need(doc, "elements", where)
    table_idx = _need(doc, "table", where)
    if len(table_idx) != len(elements):
        raise DocumentError("table size mismatch in %s" % where)
    table = {}
    for i, a in enumerate(elements):
        row = table_idx[i]
        if len(row) != len(elements):
            raise DocumentError("table row %d malformed in %s" % (i, where))
        for j, b in enumerate(elements):
            try:
                table[a, b] = elements[row[j]]
            except (IndexError, TypeError):
                raise DocumentError("table entry (%d, %d) malformed in %s" % (i, j, where))
    try:
        return FiniteGroup(elements, table)
    except ValueError as err:
        raise DocumentError("invalid group in %s: %s" % (where, err))


def space_to_doc(space, entourage_names=None):
    points = list(space.carrier)
    strs = [_point_str(p) for p in points]
    if len(set(strs)) != len(strs):
        raise DocumentError("point names collide when stringified")
    back = dict(zip(points, strs))
    ent = {}
    names = entourage_names or ["U%d" % i for i in range(len(space.coarse_generators))]
    for name, U in zip(names, space.coarse_generators):
        ent[name] = sorted([back[x], back[y]] for (x, y) in U)
    return {
        "format": FORMAT,
        "points": strs,
        "group": group_to_doc(space.group),
        "action": {
            g: [back[space.action.apply(g, p)] for p in points]
            for g in space.group.elements
        },
        "entourages": ent,
        "bornology": sorted(
            sorted(back[p] for p in B) for B in space.bornology.generators
        ),
    }


def _point_str(p):
    if isinstance(p, str):
        return p
    if isinstance(p, tuple):
        return "(" + ",".join(_point_str(x) for x in p) + ")"
    return str(p)


def space_from_doc(doc, where="space"):
    check_format(doc, where)
    points = tuple(_need(doc, "points", where))
    if len(set(points)) != len(points):
        raise DocumentError("duplicate points in %s" % where)
    group = group_from_doc(_need(doc, "group", where), where + ".group")
    action_doc = _need(doc, "action", where)
    perms = {}
    for g in group.elements:
        images = action_doc.get(g)
        if images is None or len(images) != len(points):
            raise DocumentError("action for element %r malformed in %s" % (g, where))
        perms[g] = dict(zip(points, images))
    try:
        act = Action(group, points, perms)
    except DomainError as err:
        raise DocumentError("invalid action in %s: %s" % (where, err))
    ent_doc = _need(doc, "entourages", where)
    pset = set(points)
    gens = []
    for name in sorted(ent_doc):
        pairs = []
        for pair in ent_doc[name]:
            if len(pair) != 2 or pair[0] not in pset or pair[1] not in pset:
                raise DocumentError(
                    "entourage %r has a bad pair %r in %s" % (name, pair, where)
                )
            pairs.append((pair[0], pair[1]))
        gens.append(frozenset(pairs))
    born = []
    for i, B in enumerate(_need(doc, "bornology", where)):
        for p in B:
            if p not in pset:
                raise DocumentError("bornology generator %d leaves the carrier in %s" % (i, where))
        born.append(frozenset(B))
    try:
        return make_space(points, act, gens, born)
    except DomainError as err:
        raise DocumentError("invalid space in %s: %s" % (where, err))


def entourage_from_doc(doc, name, where="space"):
    ent_doc = _need(doc, "entourages", where)
    if name not in ent_doc:
        raise DocumentError(
            "no entourage named %r (have %s)" % (name, sorted(ent_doc))
        )
    return frozenset((p, q) for p, q in ent_doc[name])


def hom_to_doc(hom):
    return {
        "format": FORMAT,
        "kind": "group-hom",
        "source": group_to_doc(hom.source),
        "target": group_to_doc(hom.target),
        "map": [hom(a) for a in hom.source.elements],
    }


def hom_from_doc(doc, where="hom"):
    check_format(doc, where)
    if doc.get("kind") != "group-hom":
        raise DocumentError("expected kind 'group-hom' in %s" % where)
    source = group_from_doc(_need(doc, "source", where), where + ".source")
    target = group_from_doc(_need(doc, "target", where), where + ".target")
    images = _need(doc, "map", where)
    if len(images) != len(source.elements):
        raise DocumentError("element map length mismatch in %s" % where)
    try:
        return GroupHom(source, target, dict(zip(source.elements, images)))
    except ValueError as err:
        raise DocumentError("invalid homomorphism in %s: %s" % (where, err))


def map_from_doc(doc, domain, codomain, where="map"):
    assignment = {p: doc[p] for p in doc}
    try:
        return SpaceMap.from_dict(domain, codomain, assignment)
    except DomainError as err:
        raise DocumentError("invalid map in %s: %s" % (where, err))


def space_maps_from_doc(doc, space, where="space"):
    """The optional named endomaps of a space document."""
    out = {}
    for name, assignment in doc.get("maps", {}).items():
        out[name] = map_from_doc(assignment, space, space, "%s.maps.%s" % (where, name))
    return out


def ctrl_object_to_doc(obj, entourage_names=None):
    space_doc = space_to_doc(obj.space, entourage_names)
    back = {p: s for p, s in zip(obj.space.carrier, space_doc["points"])}
    return {
        "format": FORMAT,
        "kind": "ctrl-object",
        "space": space_doc,
        "support": [back[p] for p in obj.support],
        "dims": {back[p]: r for p, r in obj.dims},
        "cocycle": [
            [g, back[x], [list(r) for r in M]] for (g, x), M in obj.cocycle
        ],
    }


def ctrl_object_from_doc(doc, where="ctrl-object"):
    check_format(doc, where)
    if doc.get("kind") != "ctrl-object":
        raise DocumentError("expected kind 'ctrl-object' in %s" % where)
    space = space_from_doc(_need(doc, "space", where), where + ".space")
    support = _need(doc, "support", where)
    dims = _need(doc, "dims", where)
    cocycle = {}
    for entry in _need(doc, "cocycle", where):
        if len(entry) != 3:
            raise DocumentError("cocycle entry malformed in %s" % where)
        g, x, M = entry
        cocycle[g, x] = M
    from .spaces import PreconditionError

    try:
        return ctrl_object(space, support, dims, cocycle), space
    except (PreconditionError, DomainError) as err:
        raise DocumentError("invalid controlled object in %s: %s" % (where, err))


def space_from_spec_doc(doc, where="space-spec"):
    """A space described by a construction recipe instead of raw structure:
    {"format": ..., "spec": {"kind": ..., parameters}}.

    Kinds: can_min (group), min_min / max_max / min_max (points, group,
    action), metric (points, dist rows, scales, optional group/action)."""
    from . import build as _build

    check_format(doc, where)
    spec = _need(doc, "spec", where)
    kind = _need(spec, "kind", where + ".spec")
    if kind == "can_min":
        group = group_from_doc(_need(spec, "group", where), where + ".group")
        return _build.build_can_min(group)
    points = tuple(_need(spec, "points", where))
    if "group" in spec:
        group = group_from_doc(spec["group"], where + ".group")
        action_doc = _need(spec, "action", where)
        perms = {g: dict(zip(points, action_doc[g])) for g in group.elements}
        act = Action(group, points, perms)
    else:
        act = Action.trivial(points)
    if kind in ("min_min", "max_max", "min_max"):
        builder = {
            "min_min": _build.build_min_min,
            "max_max": _build.build_max_max,
            "min_max": _build.build_min_max,
        }[kind]
        return builder(points, act)
    if kind == "metric":
        rows = _need(spec, "dist", where)
        dist = {
            (points[i], points[j]): rows[i][j]
            for i in range(len(points))
            for j in range(len(points))
        }
        return _build.build_metric(points, dist, _need(spec, "scales", where), act)
    raise DocumentError("unknown spec kind %r in %s" % (kind, where))


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as err:
        raise DocumentError("cannot read %s: %s" % (path, err))
    except json.JSONDecodeError as err:
        raise DocumentError("%s is not valid JSON: line %d" % (path, err.lineno))


def dump(doc, path):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
