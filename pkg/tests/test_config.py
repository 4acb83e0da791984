import pytest

from twprobe.config import SCENARIOS, parse_config
from twprobe.errors import ConfigError

MINIMAL = """
[pulse]
scenario = single-photon
kappa_over_gamma = 0.02
gamma_tau = 2.5
n_slices = 10000
"""


def test_minimal_single_photon_defaults():
    (run,) = parse_config(MINIMAL)
    assert run.name == "pulse" and run.scenario == "single-photon"
    assert run.params["gamma"] == 1.0
    assert run.params["t_final"] == pytest.approx(5.0)
    assert run.params["n_slices"] == 10000 and isinstance(run.params["n_slices"], int)
    assert run.output_format == "csv" and run.seed == 0


def test_run_section():
    (run,) = parse_config("[run]\nformat = json\nseed = 7\nout = outdir\n" + MINIMAL)
    assert (run.output_format, run.seed, run.output_dir) == ("json", 7, "outdir")


def test_sections_sorted():
    text = MINIMAL.replace("[pulse]", "[b]") + MINIMAL.replace("[pulse]", "[a]")
    assert [r.name for r in parse_config(text)] == ["a", "b"]


def test_faraday_defaults_stay_perturbative():
    (run,) = parse_config("[f]\nscenario = faraday\nkappa = 10\nt_final = 1\n")
    assert run.params["kappa"] * run.params["dt"] <= 1e-3
    assert run.params["step"] <= run.params["dt"]


@pytest.mark.parametrize("scenario", sorted(SCENARIOS))
def test_each_required_key_is_required(scenario):
    schema = SCENARIOS[scenario]
    body = {k: "2" for k in schema.required}
    for missing in schema.required:
        keys = {k: v for k, v in body.items() if k != missing}
        text = f"[s]\nscenario = {scenario}\n" + "".join(f"{k} = {v}\n" for k, v in keys.items())
        with pytest.raises(ConfigError, match=missing):
            parse_config(text)


@pytest.mark.parametrize("text,match", [
    ("[s]\nkappa = 1\n", "scenario"),
    ("[s]\nscenario = nope\n", "unknown scenario"),
    (MINIMAL + "bogus = 1\n", "unknown key"),
    (MINIMAL.replace("2.5", "abc"), "not a number"),
    (MINIMAL.replace("2.5", "nan"), "finite"),
    (MINIMAL.replace("10000", "10.5"), "integer"),
    (MINIMAL.replace("0.02", "-0.02"), "> 0"),
    ("[run]\nformat = xml\n" + MINIMAL, "format"),
    ("[run]\nseed = x\n" + MINIMAL, "seed"),
    ("[run]\ncolour = red\n" + MINIMAL, "unknown key"),
    ("[run]\nformat = csv\n", "no scenario"),
    ("not an ini", "malformed"),
    (MINIMAL.replace("[pulse]", "[a b]"), "file name"),
])
def test_rejections(text, match):
    with pytest.raises(ConfigError, match=match):
        parse_config(text)
