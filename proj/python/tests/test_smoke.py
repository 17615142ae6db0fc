import math

import pytest

import knapcrack as kc

TOY = kc.System([[3, 15, 6]], [9])
EXAMPLE3 = kc.System([[63, 9, 34, 46, 2, 55], [51, 19, 12, 44, 3, 25]], [99, 66])


def test_system_round_trip():
    text = TOY.to_text()
    assert text == "1 3\n3 15 6\n9\n"
    assert kc.parse_system(text) == TOY
    assert TOY.m == 1 and TOY.n == 3
    assert TOY.satisfied_by([1, 0, 1])


def test_big_integers_survive():
    big = 2**200 + 7
    sys = kc.System([[1, big, 3]], [big + 1])
    assert sys.A[0][1] == big
    assert sys.b == [big + 1]


@pytest.mark.parametrize("algo", ["reduce-half", "lo", "cjloss", "ahl"])
def test_toy_attacks(algo):
    out = kc.attack(TOY, algo=algo)
    assert out["solved"]
    assert out["x"] == [1, 0, 1]


def test_attack_with_disaggregation():
    out = kc.attack(EXAMPLE3, algo="reduce", dag=True, modulus=63, t_max=63)
    assert out["solved"]
    assert EXAMPLE3.satisfied_by(out["x"])
    assert all(v in (0, 1) for v in out["x"])


def test_brute_force_matches_attack():
    g = kc.generate(1, 12, 5)
    sols = kc.brute_force(g["system"])
    assert g["planted"] in sols
    out = kc.attack(g["system"], algo="cjloss")
    if out["solved"]:
        assert out["x"] in sols


def test_jump_points_and_ideal_flag():
    points = kc.jump_points([3, 15, 6], 9)
    assert len(points) == 23
    assert points[0][:2] == (1, 15)
    for num, den, _ in points:
        img = kc.modular_transform([3, 15, 6], 9, num, den)
        assert img["ideal"] == (img["u_k"] == 0)


def test_kernel_features_and_gamma():
    d = kc.kernel_basis(TOY)
    assert len(d) == 3 and len(d[0]) == 2
    f = kc.kernel_features(d)
    assert f["dim"] == 2
    assert math.isclose(f["mve_volume"], kc.gamma(2) * f["volume"], rel_tol=1e-9)
    assert math.isclose(kc.gamma(2), math.pi / 2, rel_tol=1e-12)


def test_errors_raise():
    with pytest.raises(kc.KnapcrackError):
        kc.System([[1, 2], [2, 4]], [1, 2])
    with pytest.raises(kc.KnapcrackError):
        kc.parse_system("1 3\n3 15\n")
    with pytest.raises(kc.KnapcrackError):
        kc.generate(1, 15, 1)
