from PIL import Image

from finitealg.catalog import Fixture, run_all
from finitealg.catalog.figures import ray_colengths, render_all


def test_render_all(tmp_path):
    report = run_all([Fixture.load(i) for i in ("table2_143", "prop_144_tangent", "ray_12111")])
    paths = render_all(report, tmp_path)
    assert [p.name for p in paths] == ["table1_status.png", "tangent_dimensions.png",
                                       "hilbert_functions.png", "ray_ray_12111.png"]
    for p in paths:
        with Image.open(p) as im:
            assert im.size[0] > 300 and im.size[1] > 200


def test_ray_colength_plot(tmp_path):
    p = ray_colengths(Fixture.load("ray_14211"), tmp_path / "r.png", lambdas=("0", "1"))
    assert p.exists()
