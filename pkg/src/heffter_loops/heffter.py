#
# For licensing see accompanying LICENSE file.
#
"""Heffter predicates over partial loops, the classical Heffter array verifier and
searcher, forced block fragments, and the construction of L_D from an affine design."""

import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from heffter_loops.arrays import (
    AffineDesign,
    ParallelClass,
    PartiallyFilledArray,
    PartitionKind,
    pair_cooccurrence,
    partition,
    validate_affine,
)
from heffter_loops.constants import (
    DEFAULT_BUDGET,
    DEFAULT_POLY_CAP,
    DEFAULT_THEOREM_POLY_CAP,
)
from heffter_loops.constructions import (
    composite_block_poly,
    general_entries,
    idempotent_square,
)
from heffter_loops.exceptions import (
    BudgetExhaustedError,
    EntryConflictError,
    InputError,
    NonAffineDesignError,
    SearchTooLargeError,
    UnsupportedBlockSizeError,
)
from heffter_loops.loops import (
    CompletionResult,
    LoopEntry,
    PartialLoop,
    complete,
    cyclic_group,
    relabel,
)
from heffter_loops.residues import is_prime, least_primitive_root
from heffter_loops.schema import (
    BlockParameters,
    BlockRef,
    ClassicalCondition,
    ClassicalReport,
    ClassicalViolation,
    Classification,
    DspsReport,
    Evaluation,
    ForcedBlockReport,
    ForcedCell,
    HeffterReport,
)
from heffter_loops.sumpoly import (
    PolynomialSet,
    SumPolynomial,
    enumerate_all,
    evaluate,
    permute_poly,
)
from heffter_loops.symbols import SignedPermutation, Undefined, block_affine_perm

logger = logging.getLogger(__name__)

# unknown sums of a four-symbol block, keyed by the positions of the pair they sum
UNKNOWNS = {
    (0, 1): "alpha",
    (0, 2): "beta",
    (0, 3): "gamma",
    (1, 2): "delta",
    (1, 3): "epsilon",
    (2, 3): "phi",
}
# (-s_i) + (-s_j) for the negative half of a four-symbol block
NEGATIVE_UNKNOWNS = {
    (3, 2): "alpha",
    (3, 1): "beta",
    (3, 0): "delta",
    (2, 1): "gamma",
    (2, 0): "epsilon",
    (1, 0): "phi",
}
PAIRINGS = (("alpha", "phi"), ("beta", "epsilon"), ("gamma", "delta"))


@dataclass(frozen=True)
class DSumPolynomialSet:
    array: PartiallyFilledArray
    design: AffineDesign
    polys: PolynomialSet

    def validate(self) -> DspsReport:
        return validate_dsps(self.array, self.design, self.polys)


def validate_dsps(
    array: PartiallyFilledArray, design: AffineDesign, polys: PolynomialSet
) -> DspsReport:
    """Every support is some Symb(B) and every positive-weight block has a polynomial."""
    refs = [ref for ref, _ in design.positive_blocks(array)]
    block_supports = {frozenset(ref.symbols) for ref in refs}
    poly_supports = {f.support for f in polys}
    unmatched = [str(f) for f in polys if f.support not in block_supports]
    uncovered = [ref for ref in refs if frozenset(ref.symbols) not in poly_supports]
    return DspsReport(
        valid=not unmatched and not uncovered,
        unmatched_polynomials=unmatched,
        uncovered_blocks=uncovered,
    )


def _zero_sum_report(polys: Iterable[SumPolynomial], loop: PartialLoop) -> HeffterReport:
    evaluated, failures = 0, []
    for f in polys:
        evaluated += 1
        value = evaluate(f, loop)
        if isinstance(value, Undefined) or value != 0:
            failures.append(
                Evaluation(
                    polynomial=str(f),
                    value=None if isinstance(value, Undefined) else value,
                )
            )
    return HeffterReport(holds=not failures, evaluated=evaluated, failures=failures)


def is_p_heffter(
    array: PartiallyFilledArray,
    design: AffineDesign,
    polys: PolynomialSet,
    loop: PartialLoop,
) -> HeffterReport:
    """Whether every member of the D-sum-polynomial set `polys` sums to 0 in `loop`.

    Raises `InputError` when `polys` is not a D-sum-polynomial set.
    """
    dsps = validate_dsps(array, design, polys)
    if not dsps.valid:
        raise InputError(
            f"Not a D-sum-polynomial set: unmatched {dsps.unmatched_polynomials}, "
            f"uncovered {[ref.label() for ref in dsps.uncovered_blocks]}"
        )
    return _zero_sum_report(polys, loop)


def _block_polynomials(
    array: PartiallyFilledArray, design: AffineDesign, cap: int
) -> PolynomialSet:
    polys = []
    for ref, _ in design.positive_blocks(array):
        if len(ref.symbols) > cap:
            raise SearchTooLargeError(f"sum polynomials of block {ref.label()}", len(ref.symbols), cap)
        polys.extend(enumerate_all(ref.symbols, cap))
    return PolynomialSet.of(polys)


def is_d_heffter(
    array: PartiallyFilledArray,
    design: AffineDesign,
    loop: PartialLoop,
    cap: int = DEFAULT_POLY_CAP,
) -> HeffterReport:
    return _zero_sum_report(_block_polynomials(array, design, cap), loop)


def _cell_partition(design_class: ParallelClass) -> set[frozenset]:
    return {frozenset(block.cells) for block in design_class.blocks}


def is_row_column_design(array: PartiallyFilledArray, design: AffineDesign) -> bool:
    expected = [
        _cell_partition(partition(array, kind)) for kind in (PartitionKind.ROW, PartitionKind.COL)
    ]
    actual = [_cell_partition(design_class) for design_class in design.classes]
    return len(actual) == 2 and all(part in actual for part in expected)


def classify(
    array: PartiallyFilledArray,
    design: AffineDesign,
    loop: PartialLoop,
    cap: int = DEFAULT_POLY_CAP,
) -> Classification:
    report = is_d_heffter(array, design, loop, cap)
    counts = pair_cooccurrence(array, design)
    pairs = list(itertools.combinations(sorted(array.symbols()), 2))
    uncovered = [pair for pair in pairs if counts[pair] == 0]
    repeated = [pair for pair in pairs if counts[pair] > 1]
    return Classification(
        d_heffter=report.holds,
        heffter_linear_space=report.holds and not uncovered and not repeated,
        heffter_array=report.holds and is_row_column_design(array, design),
        uncovered_pairs=uncovered,
        repeated_pairs=repeated,
        failures=report.failures,
    )


def _signed_residue(value: int, modulus: int) -> int:
    value %= modulus
    return value if value <= modulus // 2 else value - modulus


def is_half_set(values: Iterable[int], modulus: int) -> bool:
    """One of each pair {x, -x} of Z_modulus and never 0."""
    residues = [v % modulus for v in values]
    if modulus % 2 == 0 or 0 in residues:
        return False
    representatives = {abs(_signed_residue(v, modulus)) for v in residues}
    return len(representatives) == len(residues) == modulus // 2


def verify_heffter_system(
    blocks: Sequence[Sequence[int]], modulus: int, k: int
) -> tuple[bool, list[str]]:
    """Whether `blocks` partition a half-set of Z_modulus into zero-sum k-subsets."""
    problems = []
    values = [v for block in blocks for v in block]
    if modulus != 2 * len(blocks) * k + 1:
        problems.append(f"modulus {modulus} differs from 2nk+1 = {2 * len(blocks) * k + 1}")
    if not is_half_set(values, modulus):
        problems.append("the blocks do not cover a half-set")
    for index, block in enumerate(blocks):
        if len(block) != k:
            problems.append(f"block {index} has {len(block)} elements instead of {k}")
        if sum(block) % modulus:
            problems.append(f"block {index} sums to {sum(block) % modulus}")
    return not problems, problems


def are_orthogonal(first: Sequence[Sequence[int]], second: Sequence[Sequence[int]]) -> bool:
    """Two systems on the same half-set whose blocks meet in at most one element."""
    if sorted(v for block in first for v in block) != sorted(v for block in second for v in block):
        return False
    return all(len(set(a) & set(b)) <= 1 for a in first for b in second)


def heffter_systems_from_array(
    grid: Sequence[Sequence[int | None]],
) -> tuple[list[list[int]], list[list[int]]]:
    """The row system and the column system of a classical Heffter array."""
    rows = [[v for v in row if v is not None] for row in grid]
    columns = [[v for v in column if v is not None] for column in zip(*grid)]
    return rows, columns


def verify_classical(
    grid: Sequence[Sequence[int | None]], h: int | None = None, k: int | None = None
) -> ClassicalReport:
    """Check the H(m,n;h,k) conditions; `h` and `k` default to a totally filled grid."""
    violations: list[ClassicalViolation] = []

    def violate(condition: ClassicalCondition, detail: str):
        violations.append(ClassicalViolation(condition=condition, detail=detail))

    m = len(grid)
    n = len(grid[0]) if grid else 0
    if m == 0 or any(len(row) != n for row in grid):
        violate(ClassicalCondition.SHAPE, "the grid is not a non-empty rectangle")
        return ClassicalReport(valid=False, modulus=0, violations=violations)
    h = n if h is None else h
    k = m if k is None else k
    if m * h != n * k:
        violate(ClassicalCondition.SHAPE, f"{m} rows of {h} cells cannot match {n} columns of {k}")
    half = n * k
    modulus = 2 * half + 1

    for i, row in enumerate(grid):
        filled = sum(v is not None for v in row)
        if filled != h:
            violate(ClassicalCondition.FILLED_COUNT, f"row {i} has {filled} filled cells, not {h}")
    for j, column in enumerate(zip(*grid)):
        filled = sum(v is not None for v in column)
        if filled != k:
            violate(ClassicalCondition.FILLED_COUNT, f"column {j} has {filled} filled cells, not {k}")

    values = [v for row in grid for v in row if v is not None]
    for v in values:
        if v == 0 or abs(v) > half:
            violate(ClassicalCondition.ENTRY_RANGE, f"{v} is not in ±[{half}]")
    seen: dict[int, list[int]] = {}
    for v in values:
        seen.setdefault(abs(v), []).append(v)
    for i in range(1, half + 1):
        occurrences = seen.get(i, [])
        if len(occurrences) != 1:
            violate(ClassicalCondition.HALF_SET, f"±{i} occurs as {occurrences}")

    for i, row in enumerate(grid):
        total = sum(v for v in row if v is not None) % modulus
        if total:
            violate(ClassicalCondition.ROW_SUM, f"row {i} sums to {total} mod {modulus}")
    for j, column in enumerate(zip(*grid)):
        total = sum(v for v in column if v is not None) % modulus
        if total:
            violate(ClassicalCondition.COLUMN_SUM, f"column {j} sums to {total} mod {modulus}")
    return ClassicalReport(valid=not violations, modulus=modulus, violations=violations)


class _ClassicalSearch:
    """Row-major filling; the last cell of a row and the whole last row are forced."""

    def __init__(self, m: int, n: int, budget: int):
        self.m, self.n, self.budget = m, n, budget
        self.half = m * n
        self.modulus = 2 * self.half + 1
        self.grid = [[0] * n for _ in range(m)]
        self.used = [False] * (self.half + 1)
        self.nodes = 0

    def _usable(self, values: Sequence[int]) -> bool:
        magnitudes = [abs(v) for v in values]
        return (
            0 not in magnitudes
            and len(set(magnitudes)) == len(magnitudes)
            and not any(self.used[a] for a in magnitudes)
        )

    def _mark(self, values: Sequence[int], used: bool):
        for v in values:
            self.used[abs(v)] = used

    def fill(self, r: int, c: int) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhaustedError(self.nodes)
        if r == self.m - 1:
            last = [
                _signed_residue(-sum(self.grid[i][j] for i in range(r)), self.modulus)
                for j in range(self.n)
            ]
            if not self._usable(last) or sum(last) % self.modulus:
                return False
            self.grid[r] = last
            self._mark(last, True)
            return True
        if c == self.n - 1:
            value = _signed_residue(-sum(self.grid[r][:c]), self.modulus)
            if not self._usable([value]):
                return False
            self.grid[r][c] = value
            self._mark([value], True)
            if self.fill(r + 1, 0):
                return True
            self._mark([value], False)
            return False
        for a in range(1, self.half + 1):
            if self.used[a]:
                continue
            for value in (a, -a):
                self.grid[r][c] = value
                self.used[a] = True
                if self.fill(r, c + 1):
                    return True
                self.used[a] = False
        return False


def search_classical(m: int, n: int, budget: int = DEFAULT_BUDGET) -> list[list[int]] | None:
    """A totally filled H(m,n) over Z_{2mn+1}, or None when none exists.

    Raises `BudgetExhaustedError` when the node budget runs out first.
    """
    if m < 1 or n < 1:
        raise InputError(f"Grid dimensions must be positive, got {m}x{n}")
    search = _ClassicalSearch(m, n, budget)
    found = search.fill(0, 0)
    logger.info(f"Classical {m}x{n} search finished after {search.nodes} nodes")
    return search.grid if found else None


def classical_to_loop(
    grid: Sequence[Sequence[int | None]],
) -> tuple[PartiallyFilledArray, PartialLoop, SignedPermutation]:
    """Recast a square classical Heffter array as an array of symbols over a loop.

    The array keeps absolute values; the loop is Z_{2nk+1} relabelled by σ⁻¹,
    where σ(i) is i carrying the sign it has in `grid`.
    """
    report = verify_classical(grid)
    if not report.valid or len(grid) != len(grid[0]):
        raise InputError("Expected a square classical Heffter array")
    half = report.modulus // 2
    signs = {abs(v): v for row in grid for v in row if v is not None}
    sigma = SignedPermutation(tuple(signs[i] for i in range(1, half + 1)))
    loop = relabel(cyclic_group(half), sigma.inverse())
    array = PartiallyFilledArray.from_rows(
        [[None if v is None else abs(v) for v in row] for row in grid]
    )
    return array, loop, sigma


@dataclass(frozen=True)
class ForcedBlockStructure:
    """The sums any partial loop making a block's sums vanish must contain.

    `forced` holds concrete entries; for four symbols `unknown_cells` holds the
    sums fixed only up to the named unknowns, and `chains` the cells (x, y, value)
    where a named unknown is an operand.
    """

    symbols: tuple[int, ...]
    forced: tuple[LoopEntry, ...]
    unknown_cells: tuple[tuple[int, int, str], ...] = ()
    chains: tuple[tuple[int | str, int | str, int], ...] = ()
    pairings: tuple[tuple[str, str], ...] = ()

    @property
    def unknowns(self) -> list[str]:
        return sorted({name for _, _, name in self.unknown_cells}, key=list(UNKNOWNS.values()).index)

    def fragment(self, n: int) -> PartialLoop:
        if self.unknown_cells:
            raise InputError("Assign the unknowns with instantiate_forced first")
        return PartialLoop.from_entries(n, self.forced)

    def report(self) -> ForcedBlockReport:
        cells = [ForcedCell(x=x, y=y, value=v) for x, y, v in self.forced]
        cells += [ForcedCell(x=x, y=y, value=name) for x, y, name in self.unknown_cells]
        cells += [ForcedCell(x=x, y=y, value=v) for x, y, v in self.chains]
        return ForcedBlockReport(
            symbols=list(self.symbols),
            forced=cells,
            unknowns=self.unknowns,
            pairings=list(self.pairings),
        )


def _axiom_entries(symbols: Sequence[int]) -> list[LoopEntry]:
    entries = []
    for s in symbols:
        for x in (s, -s):
            entries.extend([(0, x, x), (x, 0, x), (x, -x, 0)])
    return entries


def derive_forced(symbols: Sequence[int]) -> ForcedBlockStructure:
    if len(set(symbols)) != len(symbols) or any(s < 1 for s in symbols):
        raise InputError(f"Block symbols must be distinct and positive: {list(symbols)}")
    t = tuple(symbols)
    if len(t) == 3:
        forced = [
            (t[i], t[j], -t[3 - i - j]) for i, j in itertools.permutations(range(3), 2)
        ]
        return ForcedBlockStructure(t, tuple(_axiom_entries(t) + forced))
    if len(t) != 4:
        raise UnsupportedBlockSizeError(
            f"No forced pattern is known for blocks of {len(t)} symbols"
        )
    unknown_cells = []
    for (i, j), name in UNKNOWNS.items():
        unknown_cells += [(t[i], t[j], name), (t[j], t[i], name)]
    for (i, j), name in NEGATIVE_UNKNOWNS.items():
        unknown_cells += [(-t[i], -t[j], name), (-t[j], -t[i], name)]
    chains = []
    for (i, j), name in UNKNOWNS.items():
        for k in range(4):
            if k in (i, j):
                continue
            (l,) = {0, 1, 2, 3} - {i, j, k}
            chains += [(name, t[k], -t[l]), (t[k], name, -t[l])]
    return ForcedBlockStructure(
        t, tuple(_axiom_entries(t)), tuple(unknown_cells), tuple(chains), PAIRINGS
    )


def instantiate_forced(
    structure: ForcedBlockStructure, assignment: Mapping[str, int], n: int
) -> PartialLoop:
    """Substitute concrete elements for the unknowns of a four-symbol block.

    Missing members of a pairing are filled in as the negation of their partner.
    """
    values = dict(assignment)
    for first, second in structure.pairings:
        if first in values and second not in values:
            values[second] = -values[first]
        elif second in values and first not in values:
            values[first] = -values[second]
        elif first in values and values[first] != -values[second]:
            raise InputError(f"{first} and {second} must be opposite elements")
    missing = [name for name in structure.unknowns if name not in values]
    if missing:
        raise InputError(f"No value assigned to {missing}")
    if any(values[name] == 0 for name in structure.unknowns):
        raise InputError("Unknown sums of distinct block symbols cannot be 0")
    entries = list(structure.forced)
    entries += [(x, y, values[name]) for x, y, name in structure.unknown_cells]
    entries += [
        (values.get(x, x) if isinstance(x, str) else x, values.get(y, y) if isinstance(y, str) else y, v)
        for x, y, v in structure.chains
    ]
    return PartialLoop.from_entries(n, entries)


def search_forced_assignments(
    structure: ForcedBlockStructure, n: int, limit: int | None = None
) -> list[dict[str, int]]:
    """Assignments of alpha, beta, gamma (their partners follow) giving valid fragments
    on which every sum over the block is 0."""
    polys = enumerate_all(structure.symbols, len(structure.symbols))
    candidates = [e for e in range(-n, n + 1) if e != 0]
    found = []
    for alpha, beta, gamma in itertools.product(candidates, repeat=3):
        assignment = {"alpha": alpha, "beta": beta, "gamma": gamma}
        try:
            fragment = instantiate_forced(structure, assignment, n)
        except InputError:
            continue
        if all(evaluate(f, fragment) == 0 for f in polys):
            found.append(assignment)
            if limit is not None and len(found) >= limit:
                break
    logger.debug(f"{len(found)} assignments found for block {structure.symbols}")
    return found


def _universe(array: PartiallyFilledArray) -> int:
    symbols = array.symbols()
    n = len(symbols)
    if symbols != set(range(1, n + 1)):
        raise InputError(f"Array symbols must be exactly [{n}]")
    return n


def assemble_ld(
    array: PartiallyFilledArray,
    design: AffineDesign,
    block_loops: Mapping[tuple[int, int], PartialLoop],
) -> PartialLoop:
    """The union of the per-block partial loops, keyed by (class index, block index)."""
    report = validate_affine(array, design)
    if not report.in_aff:
        raise NonAffineDesignError(
            f"The design is not in Aff_{design.lam}(A): mu={report.mu}, "
            f"{len(report.intersection_violations)} intersection and "
            f"{len(report.weight_violations)} weight violations"
        )
    n = _universe(array)
    owners: dict[tuple[int, int], tuple[int, str]] = {}
    for (c, b), loop in block_loops.items():
        ref = design.block_ref(array, c, b)
        if loop.n != n:
            raise InputError(f"Block {ref.label()} loop is over [{loop.n}], expected [{n}]")
        allowed = {0, *ref.symbols, *(-s for s in ref.symbols)}
        for x, y, value in sorted(loop.nontrivial_entries()):
            if not {x, y, value} <= allowed:
                raise InputError(f"Block {ref.label()} has entry {x}+{y}={value} outside its symbols")
            previous = owners.get((x, y))
            if previous is not None and previous[0] != value:
                raise EntryConflictError(
                    f"{x}+{y} is {previous[0]} in block {previous[1]} "
                    f"but {value} in block {ref.label()}"
                )
            owners[x, y] = (value, ref.label())
    return PartialLoop.from_entries(n, [(x, y, v) for (x, y), (v, _) in owners.items()])


def cyclic_assignment(symbols: Sequence[int]) -> dict[str, int]:
    """s1+s2 = s3, s1+s3 = s4 and s1+s4 = s2 for a block s1 < s2 < s3 < s4."""
    return {"alpha": symbols[2], "beta": symbols[3], "gamma": symbols[1]}


def forced_ld(
    array: PartiallyFilledArray,
    design: AffineDesign,
    assignments: Mapping[tuple[int, int], Mapping[str, int]] | None = None,
) -> PartialLoop:
    """L_D from the forced fragment of every positive-weight block.

    Four-symbol blocks take their entry of `assignments`, keyed by (class index,
    block index), and the cyclic assignment otherwise.
    """
    n = _universe(array)
    assignments = assignments or {}
    block_loops = {}
    for c, b, block in design.blocks():
        if block.weight(array) == 0:
            continue
        structure = derive_forced(design.block_ref(array, c, b).symbols)
        if structure.unknown_cells:
            assignment = assignments.get((c, b), cyclic_assignment(structure.symbols))
            block_loops[c, b] = instantiate_forced(structure, assignment, n)
        else:
            block_loops[c, b] = structure.fragment(n)
    return assemble_ld(array, design, block_loops)


def block_factorisation(size: int) -> tuple[int, int] | None:
    """(k, p) with size = kp, p an odd prime and k != 2, smallest k first."""
    for k in range(1, size + 1):
        if k == 2 or size % k:
            continue
        p = size // k
        if p > 2 and is_prime(p):
            return k, p
    return None


@dataclass(frozen=True)
class TheoremResult:
    loop: PartialLoop
    polys: PolynomialSet
    blocks: list[BlockParameters]
    heffter: HeffterReport
    completion: CompletionResult | None = field(default=None)


def _permuted_naturals(
    symbols: Sequence[int], k: int, p: int, cap: int, ref: BlockRef
) -> list[SumPolynomial]:
    chunks = [list(range(ell * p + 1, (ell + 1) * p + 1)) for ell in range(k)]
    base = composite_block_poly(chunks)
    to_symbols = {position: s for position, s in enumerate(symbols, start=1)}
    pairs = [(a, b) for a in range(1, p) for b in range(p)]
    polys = []
    for alphas in itertools.product(pairs, repeat=k):
        if len(polys) >= cap:
            logger.warning(
                f"Block {ref.label()} has {len(pairs) ** k} permuted naturals; keeping {cap}"
            )
            break
        pi = block_affine_perm(p, k, [c for pair in alphas for c in pair])
        polys.append(permute_poly(base, pi).relabel(to_symbols))
    return polys


def theorem_construct(
    array: PartiallyFilledArray,
    design: AffineDesign,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    poly_cap: int = DEFAULT_THEOREM_POLY_CAP,
) -> TheoremResult:
    """Build L_D from the blocked loops L^{Symb(B),I_B}_{p_B,r_B} of every block.

    When all positive-weight blocks have the same size a completion to a total
    loop is attempted as well.
    """
    n = _universe(array)
    block_loops, parameters, polys = {}, [], []
    for c, b, block in design.blocks():
        if block.weight(array) == 0:
            continue
        ref = design.block_ref(array, c, b)
        factors = block_factorisation(len(ref.symbols))
        if factors is None:
            raise UnsupportedBlockSizeError(
                f"Block {ref.label()} has {len(ref.symbols)} symbols, "
                "which is not kp with p an odd prime and k != 2"
            )
        k, p = factors
        r = least_primitive_root(p)
        entries = general_entries(ref.symbols, p, r, idempotent_square(k))
        block_loops[c, b] = PartialLoop.from_entries(n, entries)
        parameters.append(BlockParameters(block=ref, k=k, p=p, r=r))
        polys.extend(_permuted_naturals(ref.symbols, k, p, poly_cap, ref))
        logger.debug(f"Block {ref.label()} uses k={k}, p={p}, r={r}")
    loop = assemble_ld(array, design, block_loops)
    poly_set = PolynomialSet.of(polys)
    heffter = is_p_heffter(array, design, poly_set, loop)
    logger.info(f"Assembled L_D over [{n}] from {len(parameters)} blocks")
    completion = None
    if len({len(params.block.symbols) for params in parameters}) == 1:
        completion = complete(loop, budget, workers)
    return TheoremResult(loop, poly_set, parameters, heffter, completion)
