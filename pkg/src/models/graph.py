from collections import Counter
from fractions import Fraction
from math import prod
from typing import Any, Dict, List, Sequence, Tuple, Union
from pydantic import BaseModel, Field, field_validator, model_validator
from src.models.approx import ApproxReal
from src.utils.validators import Validators


class CirculantSpec(BaseModel):
    """Circulant multigraph C^{g_1,...,g_d}_n given by vertex count and generator multiset."""

    vertex_count: int = Field(..., ge=1)
    generators: Tuple[int, ...] = ()
    allow_loops: bool = False

    class Config:
        frozen = True

    @model_validator(mode="before")
    @classmethod
    def canonicalize_generators(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data

        vertex_count = data.get("vertex_count")
        if not isinstance(vertex_count, int) or vertex_count < 1:
            return data

        canonical = []
        for generator in data.get("generators", ()):
            if not isinstance(generator, int) or generator < 1:
                raise ValueError(f"generators must be positive integers, got {generator!r}")
            reduced = Validators.canonical_generator(generator, vertex_count)
            if reduced == 0 and not data.get("allow_loops", False):
                raise ValueError(
                    f"generator {generator} is 0 mod {vertex_count} (a loop); "
                    "set allow_loops to accept it"
                )
            canonical.append(reduced)

        return {**data, "generators": tuple(sorted(canonical))}

    @property
    def degree(self) -> int:
        return 2 * len(self.generators)

    def key(self) -> str:
        gens = ",".join(str(g) for g in self.generators)
        return f"C[{gens}]_{self.vertex_count}"


class ScaledCirculantFamily(BaseModel):
    """The member C^{1, g_1 n, ..., g_{d-1} n}_{beta n} of a scaled circulant family."""

    beta: int = Field(..., ge=1)
    base_generators: Tuple[int, ...] = ()
    scale: int = Field(..., ge=1)

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_generators(self) -> "ScaledCirculantFamily":
        is_valid, error_msg = Validators.validate_scaled_generators(
            self.beta, list(self.base_generators)
        )
        if not is_valid:
            raise ValueError(error_msg)
        return self

    @property
    def d(self) -> int:
        """Half the degree of the instantiated graph."""
        return len(self.base_generators) + 1

    @property
    def vertex_count(self) -> int:
        return self.beta * self.scale

    def instantiate(self) -> CirculantSpec:
        generators = (1,) + tuple(g * self.scale for g in self.base_generators)
        return CirculantSpec(
            vertex_count=self.vertex_count,
            generators=generators,
            allow_loops=self.vertex_count == 1,
        )

    def with_scale(self, scale: int) -> "ScaledCirculantFamily":
        return ScaledCirculantFamily(
            beta=self.beta, base_generators=self.base_generators, scale=scale
        )

    def key(self) -> str:
        gens = ",".join(str(g) for g in self.base_generators)
        return f"beta={self.beta:03d};gammas=({gens});n={self.scale:04d}"


class TorusSpec(BaseModel):
    """Discrete torus Z^d / diag(alpha_1, ..., alpha_{d-1}, n) Z^d."""

    alphas: Tuple[int, ...] = ()
    last: int = Field(..., ge=1)

    class Config:
        frozen = True

    @field_validator("alphas")
    @classmethod
    def check_alphas(cls, alphas: Tuple[int, ...]) -> Tuple[int, ...]:
        for alpha in alphas:
            if alpha < 1:
                raise ValueError(f"torus periods must be positive, got {alpha}")
        return alphas

    @property
    def dimension(self) -> int:
        return len(self.alphas) + 1

    @property
    def periods(self) -> Tuple[int, ...]:
        return self.alphas + (self.last,)

    @property
    def det_a(self) -> int:
        return prod(self.alphas)

    @property
    def det(self) -> int:
        return self.det_a * self.last

    def key(self) -> str:
        alphas = ",".join(str(a) for a in self.alphas)
        return f"alphas=({alphas});n={self.last:04d}"


class SpectrumPoint(BaseModel):
    """One Laplacian eigenvalue with the exact angles (fractions of a turn) it was built from."""

    index: Union[int, Tuple[int, ...]]
    value: ApproxReal
    exact_angle_args: Tuple[Fraction, ...]

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @property
    def is_zero(self) -> bool:
        return all(angle.denominator == 1 for angle in self.exact_angle_args)


class EdgeMultiset(BaseModel):
    """Undirected multigraph on vertices 0..n-1; keys are (u, v) with u <= v."""

    vertex_count: int = Field(..., ge=1)
    edges: Dict[Tuple[int, int], int] = Field(default_factory=dict)

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Sequence[Tuple[int, int]]) -> "EdgeMultiset":
        counter: Counter = Counter()
        for u, v in pairs:
            counter[(min(u, v), max(u, v))] += 1
        return cls(vertex_count=vertex_count, edges=dict(counter))

    def degree(self, vertex: int) -> int:
        """Degree counting multiplicity; a loop adds two edge-ends."""
        total = 0
        for (u, v), multiplicity in self.edges.items():
            if u == vertex:
                total += multiplicity
            if v == vertex:
                total += multiplicity
        return total

    def edge_count(self) -> int:
        return sum(self.edges.values())

    def loop_count(self) -> int:
        return sum(m for (u, v), m in self.edges.items() if u == v)

    def without_loops(self) -> "EdgeMultiset":
        return EdgeMultiset(
            vertex_count=self.vertex_count,
            edges={(u, v): m for (u, v), m in self.edges.items() if u != v},
        )

    def relabel(self, permutation: List[int]) -> "EdgeMultiset":
        """
        Apply a vertex permutation.

        Args:
            permutation: permutation[v] is the new label of vertex v

        Returns:
            Isomorphic multigraph
        """
        if sorted(permutation) != list(range(self.vertex_count)):
            raise ValueError("not a permutation of the vertex set")

        counter: Counter = Counter()
        for (u, v), multiplicity in self.edges.items():
            a, b = permutation[u], permutation[v]
            counter[(min(a, b), max(a, b))] += multiplicity
        return EdgeMultiset(vertex_count=self.vertex_count, edges=dict(counter))
