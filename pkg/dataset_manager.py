"""
Dataset Manager - Loading & Validating Fusion Datasets
Reads self-describing JSON datasets, canonicalizes every cyclotomic entry
and cascades the fusion-core validators before handing data out
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from cyclotomic import (CycNum, CyclotomicError, Positivity, ZERO,
                        integrality_and_positivity)
from fusion_core import (BasedModule, BasedRing, CrossedSMatrix, GradedFusionDatum,
                         SphericalDatum, dual_module, regular_module, same_module,
                         validate_based_module, validate_based_ring, validate_graded_datum)

DEFAULT_DATASETS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "datasets")


class DatasetError(Exception):
    """A dataset failed to parse or validate"""

    def __init__(self, message: str, location: str = "", witness: str = ""):
        self.location = location
        self.witness = witness
        text = message
        if location:
            text = f"{location}: {text}"
        if witness:
            text = f"{text} [{witness}]"
        super().__init__(text)


class UnknownDatasetError(DatasetError):
    """Neither a file nor a bundled dataset name"""


@dataclass
class Dataset:
    """A validated graded fusion datum with optional spherical data"""
    name: str
    description: str
    provenance: str
    modulus: int
    ring: BasedRing
    module: BasedModule
    F: Dict[str, str]
    spherical: Optional[SphericalDatum] = None
    module_is_regular: bool = False
    supplied_dual: Optional[BasedModule] = None
    components: Dict[int, BasedModule] = field(default_factory=dict)
    path: Optional[str] = None

    @property
    def dual(self) -> BasedModule:
        return dual_module(self.module)

    @property
    def graded(self) -> GradedFusionDatum:
        return GradedFusionDatum(self.modulus, self.ring, self.module, self.F, self.components)

    def fixed_labels(self) -> List[str]:
        return [c for c in self.ring.labels if self.F[c] == c]

    def summary(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'rank': self.ring.rank,
            'module_rank': self.module.rank,
            'modulus': self.modulus,
            'fixed': self.fixed_labels(),
            'spherical': self.spherical is not None,
            'components': sorted(self.components),
        }


def _cyc(value, location: str) -> CycNum:
    if isinstance(value, float):
        raise DatasetError(f"float {value!r} is not an exact entry", location)
    try:
        return CycNum.from_dict(value)
    except CyclotomicError as e:
        raise DatasetError(str(e), location)


def _multiplicity(value, location: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DatasetError(f"structure constant must be an integer, got {value!r}", location)
    if value < 0:
        raise DatasetError(f"negativity: {value}", location)
    return value


def _labels(section: Dict, location: str) -> List[str]:
    labels = section.get("labels")
    if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
        raise DatasetError("labels must be a non-empty list of strings", f"{location}.labels")
    if len(set(labels)) != len(labels):
        raise DatasetError("duplicate labels", f"{location}.labels")
    return labels


def _constants(table: Dict, left: List[str], right: List[str], location: str) -> Dict:
    constants = {}
    if not isinstance(table, dict):
        raise DatasetError("expected a nested object", location)
    for a, row in table.items():
        if a not in left:
            raise DatasetError(f"unknown label {a!r}", f"{location}.{a}")
        for b, products in row.items():
            if b not in right:
                raise DatasetError(f"unknown label {b!r}", f"{location}.{a}.{b}")
            entry = {}
            for c, n in products.items():
                where = f"{location}.{a}.{b}.{c}"
                if c not in right:
                    raise DatasetError(f"unknown label {c!r}", where)
                n = _multiplicity(n, where)
                if n:
                    entry[c] = n
            constants[(a, b)] = entry
    return constants


class DatasetManager:
    """
    Resolves dataset names against the bundled directory and turns JSON
    documents into validated Dataset objects
    """

    def __init__(self, datasets_dir: Optional[str] = None, max_witnesses: int = 20):
        self.logger = logging.getLogger(__name__)
        self.datasets_dir = datasets_dir or DEFAULT_DATASETS_DIR
        self.max_witnesses = max_witnesses

    def list_bundled(self) -> List[str]:
        if not os.path.isdir(self.datasets_dir):
            return []
        return sorted(f[:-5] for f in os.listdir(self.datasets_dir) if f.endswith(".json"))

    def resolve(self, name_or_path: str) -> str:
        if os.path.isfile(name_or_path):
            return name_or_path
        candidate = os.path.join(self.datasets_dir, f"{name_or_path}.json")
        if os.path.isfile(candidate):
            return candidate
        raise UnknownDatasetError(f"unknown dataset {name_or_path!r} "
                                  f"(bundled: {', '.join(self.list_bundled())})")

    def load(self, name_or_path: str) -> Dataset:
        path = self.resolve(name_or_path)
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise DatasetError(f"parse error: {e.msg}", f"{path}:{e.lineno}:{e.colno}")
        dataset = self.parse(data, source=path)
        self.logger.info(f"Dataset loaded: {dataset.name} (rank {dataset.ring.rank}, "
                         f"module rank {dataset.module.rank}, N = {dataset.modulus})")
        return dataset

    def parse(self, data: Dict, source: str = "<memory>") -> Dataset:
        if not isinstance(data, dict):
            raise DatasetError("top level must be an object", source)
        try:
            name = data.get("name") or os.path.splitext(os.path.basename(source))[0]
            modulus = data.get("modulus", 1)
            if isinstance(modulus, bool) or not isinstance(modulus, int) or modulus < 1:
                raise DatasetError(f"modulus must be a positive integer, got {modulus!r}", "modulus")
            ring = self._parse_ring(data["ring"])
            self._require(validate_based_ring(ring, self.max_witnesses), "ring")

            regular = "module" not in data
            module = regular_module(ring) if regular else self._parse_module(data["module"], ring, "module")
            self._require(validate_based_module(module, self.max_witnesses), "module")

            F = {c: c for c in ring.labels}
            for a, b in data.get("F", {}).items():
                if a not in F or b not in F:
                    raise DatasetError(f"unknown label in F: {a!r} -> {b!r}", "F")
                F[a] = b
            components = self._parse_components(data.get("components", {}), ring)
            graded = GradedFusionDatum(modulus, ring, module, F, components)
            self._require(validate_graded_datum(graded, self.max_witnesses), "graded")

            supplied_dual = None
            if "dual_module" in data:
                supplied_dual = self._parse_module(data["dual_module"], ring, "dual_module")
                witness = same_module(supplied_dual, dual_module(module))
                if witness:
                    raise DatasetError("supplied dual module disagrees with the star rule",
                                       "dual_module", witness)

            spherical = None
            if "spherical" in data:
                spherical = self._parse_spherical(data["spherical"], ring, module, F, regular)
        except KeyError as e:
            raise DatasetError(f"missing required key {e}", source)

        return Dataset(name=name, description=data.get("description", ""),
                       provenance=data.get("provenance", ""), modulus=modulus, ring=ring,
                       module=module, F=F, spherical=spherical, module_is_regular=regular,
                       supplied_dual=supplied_dual, components=components,
                       path=source)

    def _require(self, check, location: str):
        if not check.passed:
            raise DatasetError("axiom violation", location, "; ".join(check.witnesses[:3]))

    def _parse_ring(self, section: Dict) -> BasedRing:
        labels = _labels(section, "ring")
        unit = section.get("unit", labels[0])
        star = {c: c for c in labels}
        star.update(section.get("star", {}))
        constants = _constants(section.get("fusion", {}), labels, labels, "ring.fusion")
        for a in labels:
            constants.setdefault((unit, a), {a: 1})
            constants.setdefault((a, unit), {a: 1})
        # commutativity lets files list one of (a, b) and (b, a)
        for (a, b), row in list(constants.items()):
            constants.setdefault((b, a), dict(row))
        constants = {k: v for k, v in constants.items() if v}
        return BasedRing(labels=tuple(labels), unit=unit, star=star, constants=constants,
                         name=section.get("name", "K(C)"))

    def _parse_module(self, section: Dict, ring: BasedRing, location: str) -> BasedModule:
        labels = _labels(section, location)
        star = {m: m for m in labels}
        star.update(section.get("star", {}))
        table = section.get("action", {})
        action = {}
        if not isinstance(table, dict):
            raise DatasetError("expected a nested object", f"{location}.action")
        for c, row in table.items():
            if c not in ring.labels:
                raise DatasetError(f"unknown ring label {c!r}", f"{location}.action.{c}")
            for m, images in row.items():
                if m not in labels:
                    raise DatasetError(f"unknown module label {m!r}", f"{location}.action.{c}.{m}")
                entry = {}
                for n, k in images.items():
                    where = f"{location}.action.{c}.{m}.{n}"
                    if n not in labels:
                        raise DatasetError(f"unknown module label {n!r}", where)
                    k = _multiplicity(k, where)
                    if k:
                        entry[n] = k
                action[(c, m)] = entry
        for m in labels:
            action.setdefault((ring.unit, m), {m: 1})
        action = {k: v for k, v in action.items() if v}
        return BasedModule(ring=ring, labels=tuple(labels), star=star, action=action,
                           name=section.get("name", "K(M)" if location == "module" else "K(M)^-1"))

    def _parse_components(self, section: Dict, ring: BasedRing) -> Dict[int, BasedModule]:
        """Further graded components, keyed by grade: {"2": {labels, action}}"""
        if not isinstance(section, dict):
            raise DatasetError("expected an object keyed by grade", "components")
        components = {}
        for key, body in section.items():
            try:
                grade = int(key)
            except ValueError:
                raise DatasetError(f"grade must be an integer, got {key!r}", f"components.{key}")
            if not isinstance(body, dict):
                raise DatasetError("expected a module object", f"components.{key}")
            components[grade] = self._parse_module({"name": f"K(M_{grade})", **body}, ring,
                                                   f"components.{key}")
        return components

    def _parse_spherical(self, section: Dict, ring: BasedRing, module: BasedModule,
                         F: Dict[str, str], regular: bool) -> SphericalDatum:
        labels = list(ring.labels)
        dims_C = {c: _cyc(section["dims_C"][c], f"spherical.dims_C.{c}") for c in labels}
        raw_dims_M = section.get("dims_M", section["dims_C"] if regular else None)
        if raw_dims_M is None:
            raise DatasetError("dims_M is required when a module is given", "spherical.dims_M")
        dims_M = {m: _cyc(raw_dims_M[m], f"spherical.dims_M.{m}") for m in module.labels}

        rows = section["S"]
        if len(rows) != len(labels) or any(len(r) != len(labels) for r in rows):
            raise DatasetError(f"S must be {len(labels)}x{len(labels)}", "spherical.S")
        S = tuple(tuple(_cyc(x, f"spherical.S[{i}][{j}]") for j, x in enumerate(r))
                  for i, r in enumerate(rows))

        fixed = [c for c in labels if F[c] == c]
        if "Scross" in section:
            X = section["Scross"]
            declared_rows, declared_columns = X["rows"], X["columns"]
            if sorted(declared_rows) != sorted(fixed):
                raise DatasetError(f"rows {declared_rows} are not the F-fixed labels {fixed}",
                                   "spherical.Scross.rows")
            if sorted(declared_columns) != sorted(module.labels):
                raise DatasetError(f"columns {declared_columns} are not the module labels",
                                   "spherical.Scross.columns")
            matrix = X["matrix"]
            if len(matrix) != len(declared_rows) or any(len(r) != len(declared_columns) for r in matrix):
                raise DatasetError("matrix shape does not match rows x columns", "spherical.Scross.matrix")
            entries = {(c, m): _cyc(matrix[i][j], f"spherical.Scross.matrix[{i}][{j}]")
                       for i, c in enumerate(declared_rows) for j, m in enumerate(declared_columns)}
            Scross = CrossedSMatrix(tuple(fixed), tuple(module.labels),
                                    tuple(tuple(entries[(c, m)] for m in module.labels) for c in fixed))
        elif regular:
            Scross = CrossedSMatrix(tuple(labels), tuple(labels), S)
        else:
            raise DatasetError("Scross is required when a module is given", "spherical.Scross")

        global_dim = _cyc(section["global_dim"], "spherical.global_dim")
        spherical = SphericalDatum(tuple(labels), dims_C, dims_M, S, Scross, global_dim)
        self._check_spherical(spherical, ring)
        return spherical

    def _check_spherical(self, spherical: SphericalDatum, ring: BasedRing):
        unit_row = spherical.S[spherical.labels.index(ring.unit)]
        for c, value in zip(spherical.labels, unit_row):
            if value != spherical.dims_C[c]:
                raise DatasetError("S row of the unit differs from dims_C",
                                   "spherical.S", f"{c}: {value} != {spherical.dims_C[c]}")
        for where, dims in (("dims_C", spherical.dims_C), ("dims_M", spherical.dims_M)):
            for label, d in dims.items():
                profile = integrality_and_positivity(d)
                if not profile.is_algebraic_integer or not profile.is_totally_real:
                    raise DatasetError("dimension must be a totally real algebraic integer",
                                       f"spherical.{where}.{label}", str(d))
                if d.to_complex().real <= 0:
                    raise DatasetError("dimension must be positive", f"spherical.{where}.{label}", str(d))
        total_C = sum((d * d for d in spherical.dims_C.values()), ZERO)
        total_M = sum((d * d for d in spherical.dims_M.values()), ZERO)
        if total_C != spherical.global_dim:
            raise DatasetError("global_dim != Σ dims_C²", "spherical.global_dim", str(total_C))
        if total_M != spherical.global_dim:
            raise DatasetError("global_dim != Σ dims_M²", "spherical.global_dim", str(total_M))
        positivity = integrality_and_positivity(spherical.global_dim).is_totally_positive
        if positivity is Positivity.NOT_POSITIVE:
            raise DatasetError("global dimension is not totally positive", "spherical.global_dim")
        if positivity is Positivity.UNDECIDED:
            self.logger.warning("Total positivity of the global dimension is undecided")


def load_dataset(path: str, datasets_dir: Optional[str] = None) -> Dataset:
    return DatasetManager(datasets_dir).load(path)


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    manager = DatasetManager()
    for name in manager.list_bundled():
        print(manager.load(name).summary())
