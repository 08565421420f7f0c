"""Built-in rank-2 example seeds and their embedded golden tables.

The two cases ship with the reference matrices and polynomials along the
path t0 -1- t1 -2- t2 -1- t3, transcribed verbatim; the table runner
recomputes every entry through the recursions and diffs. One transcribed
entry is knowingly inconsistent with its own recursion (the coarse
C-matrix at t3, entry (1,1) of case 1): the runner recomputes it, applies
both block-relation forms to the transcribed fine C-matrix, and reports
the disagreement explicitly instead of silently matching either value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .polyring import LaurentPolynomial
from .composite import Realization, block_offsets, build_realization, enlarge, sigma_of_word
from .pattern import ExchangeMatrix
from .invariants import CompositeInvariants, GeneralizedInvariants

CASE_WORD = (1, 2, 1)

CASE1 = {
    "rank": 2,
    "degree": (2, 1),
    "B": ((0, -1), (1, 0)),
    "D": (1, 1),
}

CASE2 = {
    "rank": 2,
    "degree": (2, 3),
    "B": ((0, 1), (-2, 0)),
    "D": (2, 1),
}

EXAMPLE_ENLARGEMENT = {
    "B": ((0, 1), (-2, 0)),
    "degree": (2, 3),
    "result": (
        (0, 0, 1, 1, 1),
        (0, 0, 1, 1, 1),
        (-2, -2, 0, 0, 0),
        (-2, -2, 0, 0, 0),
        (-2, -2, 0, 0, 0),
    ),
}

# Golden matrices per vertex t0..t3.

TABLE1_CG = (
    ((1, 0), (0, 1)),
    ((-1, 0), (0, 1)),
    ((-1, 0), (0, -1)),
    ((-1, -2), (0, -1)),  # transcribed as printed; see KNOWN_DISCREPANCY
)
TABLE1_CC = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((-1, 0, 0), (0, -1, 0), (0, 0, 1)),
    ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ((1, 0, -1), (0, 1, -1), (0, 0, -1)),
)
TABLE1_GG = (
    ((1, 0), (0, 1)),
    ((-1, 0), (0, 1)),
    ((-1, 0), (0, -1)),
    ((1, 0), (-2, -1)),
)
TABLE1_GC = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((-1, 0, 0), (0, -1, 0), (0, 0, 1)),
    ((-1, 0, 0), (0, -1, 0), (0, 0, -1)),
    ((1, 0, 0), (0, 1, 0), (-1, -1, -1)),
)

# F-polynomials as (coefficient, monomial) term lists.

TABLE1_FG = (
    ([(1, {})], [(1, {})]),
    (
        [(1, {}), (1, {"z11": 1, "y1": 1}), (1, {"y1": 2})],
        [(1, {})],
    ),
    (
        [(1, {}), (1, {"z11": 1, "y1": 1}), (1, {"y1": 2})],
        [(1, {}), (1, {"y2": 1}), (1, {"z11": 1, "y1": 1, "y2": 1}), (1, {"y1": 2, "y2": 1})],
    ),
    (
        [
            (1, {}),
            (2, {"y2": 1}),
            (1, {"y2": 2}),
            (1, {"z11": 1, "y1": 1, "y2": 1}),
            (1, {"z11": 1, "y1": 1, "y2": 2}),
            (1, {"y1": 2, "y2": 2}),
        ],
        [(1, {}), (1, {"y2": 1}), (1, {"z11": 1, "y1": 1, "y2": 1}), (1, {"y1": 2, "y2": 1})],
    ),
)

_F21_FULL = [
    (1, {}),
    (1, {"y21": 1}),
    (1, {"y11": 1, "y21": 1}),
    (1, {"y12": 1, "y21": 1}),
    (1, {"y11": 1, "y12": 1, "y21": 1}),
]

TABLE1_FC = (
    ([(1, {})], [(1, {})], [(1, {})]),
    ([(1, {}), (1, {"y11": 1})], [(1, {}), (1, {"y12": 1})], [(1, {})]),
    ([(1, {}), (1, {"y11": 1})], [(1, {}), (1, {"y12": 1})], _F21_FULL),
    (
        [(1, {}), (1, {"y21": 1}), (1, {"y12": 1, "y21": 1})],
        [(1, {}), (1, {"y21": 1}), (1, {"y11": 1, "y21": 1})],
        _F21_FULL,
    ),
)

TABLE2_CG = (
    ((1, 0), (0, 1)),
    ((-1, 2), (0, 1)),
    ((11, -2), (6, -1)),
    ((-11, 20), (-6, 11)),
)
TABLE2_CC = (
    tuple(tuple(1 if i == j else 0 for j in range(5)) for i in range(5)),
    (
        (-1, 0, 1, 1, 1),
        (0, -1, 1, 1, 1),
        (0, 0, 1, 0, 0),
        (0, 0, 0, 1, 0),
        (0, 0, 0, 0, 1),
    ),
    (
        (5, 6, -1, -1, -1),
        (6, 5, -1, -1, -1),
        (2, 2, -1, 0, 0),
        (2, 2, 0, -1, 0),
        (2, 2, 0, 0, -1),
    ),
    (
        (-5, -6, 10, 10, 10),
        (-6, -5, 10, 10, 10),
        (-2, -2, 3, 4, 4),
        (-2, -2, 4, 3, 4),
        (-2, -2, 4, 4, 3),
    ),
)
TABLE2_GG = (
    ((1, 0), (0, 1)),
    ((-1, 0), (4, 1)),
    ((-1, -3), (4, 11)),
    ((-11, -3), (40, 11)),
)
TABLE2_GC = (
    tuple(tuple(1 if i == j else 0 for j in range(5)) for i in range(5)),
    (
        (-1, 0, 0, 0, 0),
        (0, -1, 0, 0, 0),
        (2, 2, 1, 0, 0),
        (2, 2, 0, 1, 0),
        (2, 2, 0, 0, 1),
    ),
    (
        (-1, 0, -1, -1, -1),
        (0, -1, -1, -1, -1),
        (2, 2, 3, 4, 4),
        (2, 2, 4, 3, 4),
        (2, 2, 4, 4, 3),
    ),
    (
        (-5, -6, -1, -1, -1),
        (-6, -5, -1, -1, -1),
        (20, 20, 3, 4, 4),
        (20, 20, 4, 3, 4),
        (20, 20, 4, 4, 3),
    ),
)

KNOWN_DISCREPANCY = {
    "case": 1,
    "matrix": "C_g",
    "vertex": 3,
    "entry": (0, 0),
    "printed": -1,
    "recursion": 1,
}


def case_data(case: int) -> dict:
    if case == 1:
        return CASE1
    if case == 2:
        return CASE2
    raise ValueError("unknown case")


def case_document(case: int) -> dict:
    """The built-in case as a seed document (the CLI's JSON schema)."""
    data = case_data(case)
    n = data["rank"]
    r = data["degree"]
    gens = [f"y{i + 1}" for i in range(n)] + [
        f"z{i + 1}{l + 1}" for i in range(n) for l in range(r[i] - 1)
    ]
    one_term = [{"multiplicity": 1, "monomial": {}}]
    Z = []
    for i in range(n):
        row = [list(one_term)]
        for l in range(r[i] - 1):
            row.append([{"multiplicity": 1, "monomial": {f"z{i + 1}{l + 1}": 1}}])
        row.append(list(one_term))
        Z.append(row)
    return {
        "schema": "gencluster-seed/1",
        "rank": n,
        "degree": list(r),
        "B": [list(row) for row in data["B"]],
        "D": list(data["D"]),
        "semifield": {"kind": "universal", "generators": gens},
        "y": [{f"y{i + 1}": 1} for i in range(n)],
        "Z": Z,
    }


def case_realization(case: int) -> Realization:
    data = case_data(case)
    return build_realization(
        data["rank"], data["degree"], data["B"], data["D"]
    )


@dataclass
class TableEntry:
    label: str
    status: str  # "match" | "known-discrepancy" | "mismatch"
    expected: str
    got: str
    note: str = ""

    def line(self) -> str:
        out = f"{self.status.upper():18} {self.label}: expected {self.expected}, got {self.got}"
        if self.note:
            out += f" [{self.note}]"
        return out


@dataclass
class TableCheckResult:
    case: int
    entries: list = field(default_factory=list)
    ok: bool = True
    flagged: int = 0

    def add(self, entry: TableEntry):
        self.entries.append(entry)
        if entry.status == "mismatch":
            self.ok = False
        elif entry.status == "known-discrepancy":
            self.flagged += 1


def _fmt(rows) -> str:
    return "[" + ",".join("[" + ",".join(str(v) for v in row) + "]" for row in rows) + "]"


def _golden_poly(table, terms) -> LaurentPolynomial:
    out = LaurentPolynomial.zero(table)
    for coeff, mono in terms:
        out = out + LaurentPolynomial.monomial(table, mono, coeff)
    return out


def run_table_check(case: int) -> TableCheckResult:
    """Recompute every transcribed entry of one case and diff it."""
    data = case_data(case)
    result = TableCheckResult(case=case)
    n, r = data["rank"], data["degree"]
    B = ExchangeMatrix.from_rows(data["B"], data["D"])

    got = enlarge(
        ExchangeMatrix.from_rows(EXAMPLE_ENLARGEMENT["B"]), EXAMPLE_ENLARGEMENT["degree"]
    ).rows
    want = EXAMPLE_ENLARGEMENT["result"]
    result.add(
        TableEntry(
            label="enlargement example",
            status="match" if got == want else "mismatch",
            expected=_fmt(want),
            got=_fmt(got),
        )
    )

    ge = GeneralizedInvariants(B, r)
    ce = CompositeInvariants(B, r)
    ge_snaps = [(ge.c_rows(), ge.g_rows(), [f for f in ge.F])]
    ce_snaps = [(ce.c_rows(), ce.g_rows(), [f for f in ce.F])]
    for k in CASE_WORD:
        ge.step(k)
        ce.step(k)
        ge_snaps.append((ge.c_rows(), ge.g_rows(), [f for f in ge.F]))
        ce_snaps.append((ce.c_rows(), ce.g_rows(), [f for f in ce.F]))

    if case == 1:
        goldens = {
            "C_g": TABLE1_CG,
            "G_g": TABLE1_GG,
            "C_c": TABLE1_CC,
            "G_c": TABLE1_GC,
        }
    else:
        goldens = {
            "C_g": TABLE2_CG,
            "G_g": TABLE2_GG,
            "C_c": TABLE2_CC,
            "G_c": TABLE2_GC,
        }

    known = KNOWN_DISCREPANCY if case == KNOWN_DISCREPANCY["case"] else None
    for t in range(4):
        for label, table_data in goldens.items():
            snaps = ge_snaps if label.endswith("_g") else ce_snaps
            computed = snaps[t][0] if label.startswith("C") else snaps[t][1]
            expected = table_data[t]
            if (
                known
                and label == known["matrix"]
                and t == known["vertex"]
                and computed != expected
            ):
                entry = _flag_known_discrepancy(result, computed, expected, case, r)
                result.add(entry)
                continue
            result.add(
                TableEntry(
                    label=f"{label} at t{t}",
                    status="match" if computed == expected else "mismatch",
                    expected=_fmt(expected),
                    got=_fmt(computed),
                )
            )

    if case == 1:
        for t in range(4):
            for i in range(n):
                expect = _golden_poly(ge.table, TABLE1_FG[t][i])
                got_poly = ge_snaps[t][2][i]
                result.add(
                    TableEntry(
                        label=f"F_g[{i + 1}] at t{t}",
                        status="match" if got_poly == expect else "mismatch",
                        expected=expect.render(),
                        got=got_poly.render(),
                    )
                )
            for flat in range(sum(r)):
                expect = _golden_poly(ce.table, TABLE1_FC[t][flat])
                got_poly = ce_snaps[t][2][flat]
                result.add(
                    TableEntry(
                        label=f"F_c[{flat + 1}] at t{t}",
                        status="match" if got_poly == expect else "mismatch",
                        expected=expect.render(),
                        got=got_poly.render(),
                    )
                )
    return result


def _flag_known_discrepancy(result, computed, expected, case, r) -> TableEntry:
    """Confirm the transcribed-value disagreement through both block relations."""
    known = KNOWN_DISCREPANCY
    i0, j0 = known["entry"]
    offs = block_offsets(r)
    diff_positions = [
        (i, j)
        for i in range(len(expected))
        for j in range(len(expected))
        if computed[i][j] != expected[i][j]
    ]
    if diff_positions != [known["entry"]]:
        return TableEntry(
            label=f"{known['matrix']} at t{known['vertex']}",
            status="mismatch",
            expected=_fmt(expected),
            got=_fmt(computed),
            note="disagreement outside the known entry",
        )
    recursion_value = computed[i0][j0]
    printed_cc = TABLE1_CC[known["vertex"]] if case == 1 else None
    sig = sigma_of_word(CASE_WORD, len(r))
    form_sum = sum(printed_cc[offs[i0] + l][offs[j0]] for l in range(r[i0]))
    tilde = {
        printed_cc[offs[i0] + l][offs[j0] + m] - (sig[j0] if (i0, l) == (j0, m) else 0)
        for l in range(r[i0])
        for m in range(r[j0])
    }
    form_tilde = (
        r[i0] * tilde.pop() + (sig[j0] if i0 == j0 else 0) if len(tilde) == 1 else None
    )
    if form_sum == recursion_value == form_tilde != known["printed"]:
        note = (
            f"recursion gives {recursion_value}, transcription says {known['printed']}; "
            f"block-column sum of the transcribed fine matrix gives {form_sum} "
            f"and the shifted-entry form gives {form_tilde}"
        )
        return TableEntry(
            label=f"{known['matrix']} at t{known['vertex']} entry {known['entry']}",
            status="known-discrepancy",
            expected=str(known["printed"]),
            got=str(recursion_value),
            note=note,
        )
    return TableEntry(
        label=f"{known['matrix']} at t{known['vertex']}",
        status="mismatch",
        expected=_fmt(expected),
        got=_fmt(computed),
        note="cross-checks failed to confirm the known entry",
    )
