"""Regenerate tests/fixtures/demo_corpus.csv.

One reference set (venue J1, year 2007, articles) of exactly 1000 papers in
six tie bands, so the mid-rule percentile of each band is fixed by the band
sizes alone. Two researcher units (PI1, PI2) sit inside a background unit
(BG) such that, per six-class percentile ranks, PI1 scores 65 and PI2 122,
while mean citation rates rank them the other way round (70.96 vs 24.28).

Band layout (value, total, BG/PI1/PI2 split, resulting mid percentile):
    A:   0 x500 = 458/ 7/35  -> 25.0  (class 1)
    B:  20 x250 = 230/ 6/14  -> 62.5  (class 2)
    C:  50 x150 = 137/ 3/10  -> 82.5  (class 3)
    D: 108 x 50 =  48/ 1/ 1  -> 92.5  (class 4)
    E: 138 x 40 =  32/ 3/ 5  -> 97.0  (class 5)
    F: 280 x 10 =   7/ 3/ 0  -> 99.5  (class 6)
"""

from __future__ import annotations

import csv
from pathlib import Path

BANDS = (
    # citations, background, PI1, PI2
    (0, 458, 7, 35),
    (20, 230, 6, 14),
    (50, 137, 3, 10),
    (108, 48, 1, 1),
    (138, 32, 3, 5),
    (280, 7, 3, 0),
)

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "demo_corpus.csv"


def main() -> None:
    OUT.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    paper_no = 0
    for citations, n_bg, n_pi1, n_pi2 in BANDS:
        for unit, count in (("BG", n_bg), ("PI1", n_pi1), ("PI2", n_pi2)):
            for _ in range(count):
                paper_no += 1
                rows.append((f"p{paper_no:04d}", unit, "J1", 2007, "article", citations))
    assert paper_no == 1000
    with OUT.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("paper_id", "unit_id", "venue_id", "pub_year", "doc_type", "citations"))
        writer.writerows(rows)
    print(f"wrote {paper_no} records to {OUT}")


if __name__ == "__main__":
    main()
