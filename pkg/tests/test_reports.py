import numpy as np

from scribbleseg.evaluation import (
    ConsensusMap,
    IouReport,
    final_score,
)
from scribbleseg.reports import (
    consensus_table,
    eval_table,
    plot_category_iou,
    plot_consensus_map,
    score_table,
)


def report(values, mean=None):
    mean = mean if mean is not None else sum(values.values()) / len(values)
    return IouReport(
        per_category=values, mean_iou=mean, categories_evaluated=tuple(sorted(values))
    )


def test_eval_table_layout():
    per_image = {
        "b": report({0: 1.0, 1: 0.5}),
        "a": report({0: 0.25}),
    }
    aggregate = report({0: 0.625, 1: 0.5})
    text = eval_table(per_image, aggregate)
    lines = text.strip().splitlines()
    assert lines[0] == "image,category,iou,mean_iou,passed"
    assert lines[1].startswith("a,0,0.250000")  # images sorted
    assert "a,mean,,0.250000,fail" in lines
    assert "b,mean,,0.750000,pass" in lines
    assert lines[-1].startswith("ALL,mean,,")


def test_eval_table_honors_threshold():
    per_image = {"a": report({0: 0.75})}
    aggregate = report({0: 0.75})
    strict = eval_table(per_image, aggregate, threshold=0.9)
    assert "a,mean,,0.750000,fail" in strict


def test_score_table_single_row():
    rep = final_score(0.9, 90.0, 1)
    text = score_table(0.9, 90.0, 1, rep)
    lines = text.strip().splitlines()
    assert len(lines) == 2
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    assert row["final_score"] == "109"
    assert row["expected_time_s"] == "60.0"


def test_consensus_table_histogram():
    counts = np.array([[0, 1], [2, 2]], np.int32)
    table = consensus_table(ConsensusMap(counts=counts, annotator_total=2, category=1))
    lines = table.strip().splitlines()
    assert lines[0] == "annotator_count,pixels"
    assert lines[1] == "0,1"
    assert lines[2] == "1,1"
    assert lines[3] == "2,2"


def test_figures_render_to_files(tmp_path):
    aggregate = report({0: 0.9, 1: 0.7, 5: 0.4})
    bar_path = plot_category_iou(tmp_path / "bars.png", aggregate)
    assert bar_path.is_file() and bar_path.stat().st_size > 1000

    counts = np.zeros((20, 30), np.int32)
    counts[5:15, 10:20] = 3
    counts[8:12, 13:17] = 7
    heat_path = plot_consensus_map(
        tmp_path / "heat.png", ConsensusMap(counts=counts, annotator_total=7, category=1)
    )
    assert heat_path.is_file() and heat_path.stat().st_size > 1000
