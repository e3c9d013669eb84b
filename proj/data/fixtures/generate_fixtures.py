#!/usr/bin/env python3
"""Regenerates the synthetic event logs used by the demos and tests.

Output is fully deterministic (no randomness, fixed base timestamps), so
re-running this script reproduces the checked-in files byte for byte.

  p2p.xes            purchase-to-pay log: some cases skip the requisition
                     approval, some pay the same invoice twice (non-consecutively).
  fairness.xes       40 loan-application cases; every female applicant (gender = "F")
                     goes through "Extra Check", no male applicant does.
  fairness_small.xes 4 cases (2 female) with the same pattern.
"""

from datetime import datetime, timedelta, timezone
from pathlib import Path
from xml.sax.saxutils import quoteattr

HERE = Path(__file__).resolve().parent
BASE = datetime(2024, 3, 1, 8, 0, 0, tzinfo=timezone.utc)


def iso(ts):
    return ts.strftime("%Y-%m-%dT%H:%M:%S.000+00:00")


def attr(kind, key, value):
    return f"<{kind} key={quoteattr(key)} value={quoteattr(str(value))}/>"


def write_log(path, traces):
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<log xes.version="1.0" xmlns="http://www.xes-standard.org/">',
        '  <extension name="Concept" prefix="concept" uri="http://www.xes-standard.org/concept.xesext"/>',
        '  <extension name="Time" prefix="time" uri="http://www.xes-standard.org/time.xesext"/>',
    ]
    for case_id, case_attrs, events in traces:
        lines.append("  <trace>")
        lines.append("    " + attr("string", "concept:name", case_id))
        for kind, key, value in case_attrs:
            lines.append("    " + attr(kind, key, value))
        for activity, ts, extra in events:
            lines.append("    <event>")
            lines.append("      " + attr("string", "concept:name", activity))
            lines.append("      " + attr("date", "time:timestamp", iso(ts)))
            for kind, key, value in extra:
                lines.append("      " + attr(kind, key, value))
            lines.append("    </event>")
        lines.append("  </trace>")
    lines.append("</log>")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def timeline(start, steps):
    """steps: list of (activity, minutes after previous event, resource)."""
    events, ts = [], start
    for activity, delta, resource in steps:
        ts = ts + timedelta(minutes=delta)
        events.append((activity, ts, [("string", "org:resource", resource)]))
    return events


def p2p():
    happy = [
        ("Create Purchase Requisition", 0, "Anna"),
        ("Approve Purchase Requisition", 90, "Marc"),
        ("Create Purchase Order", 60, "Anna"),
        ("Receive Goods", 2880, "Lena"),
        ("Receive Invoice", 240, "Tom"),
        ("Pay Invoice", 1440, "Tom"),
    ]
    skip_approval = [s for s in happy if s[0] != "Approve Purchase Requisition"]
    double_payment = happy[:5] + [
        ("Pay Invoice", 1440, "Tom"),
        ("Record Goods Return", 600, "Lena"),
        ("Pay Invoice", 720, "Tom"),
    ]
    slow_approval = [(a, d * 20 if a == "Approve Purchase Requisition" else d, r) for a, d, r in happy]
    shapes = [happy, happy, skip_approval, happy, double_payment, skip_approval, slow_approval, double_payment]
    traces = []
    for i, shape in enumerate(shapes):
        start = BASE + timedelta(days=i)
        traces.append((f"PO-{1001 + i}", [("float", "amount", 500.0 + 125.0 * i)], timeline(start, shape)))
    write_log(HERE / "p2p.xes", traces)


def fairness_traces(n_cases):
    traces = []
    for i in range(n_cases):
        female = i % 2 == 0
        start = BASE + timedelta(hours=6 * i)
        steps = [("Request", 0, "Clerk")]
        if female:
            steps.append(("Extra Check", 120, "Supervisor"))
        steps.append(("Review", 60, "Clerk"))
        if i % 5 == 3:
            steps.append(("Request Info", 30, "Clerk"))
            steps.append(("Review", 600, "Clerk"))
        steps.append(("Decision", 45, "Manager"))
        attrs = [("string", "gender", "F" if female else "M"), ("int", "age", 22 + (i * 7) % 40)]
        traces.append((f"L-{i + 1:03d}", attrs, timeline(start, steps)))
    return traces


def main():
    p2p()
    write_log(HERE / "fairness.xes", fairness_traces(40))
    write_log(HERE / "fairness_small.xes", fairness_traces(4))


if __name__ == "__main__":
    main()
