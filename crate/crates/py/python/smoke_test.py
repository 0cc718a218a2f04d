"""Smoke test for the luequiv Python module.

Build the extension and put it on the path first, e.g.

    cargo build -p luequiv-py --release --features extension-module
    cp target/release/libluequiv_py.so /tmp/luequiv.so
    PYTHONPATH=/tmp python3 crates/py/python/smoke_test.py
"""

import math

import luequiv


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    w = luequiv.PureState.w()
    ghz = luequiv.PureState.ghz(3)
    assert w.dims == [2, 2, 2]

    fw = luequiv.fingerprint(w, "12-3")
    assert close(fw.j[1], 5 / 9), fw.j
    assert close(fw.spectrum[0], 2 / 3) and close(fw.spectrum[1], 1 / 3)
    assert close(fw.x(0, 0, 0).real, 0.25) and fw.generic
    fg = luequiv.fingerprint(ghz, "12-3")
    assert luequiv.compare_fingerprints(fg, fw) == "Distinct"
    again = luequiv.Fingerprint.from_json(fw.to_json())
    assert again.to_json() == fw.to_json()

    rho = w.partial_trace([2])
    assert close(sum(rho[i][i].real for i in range(4)), 1.0)
    assert len(w.schmidt_coefficients("1-23")) == 2

    psi = luequiv.PureState.random([2, 3, 2], 5)
    us = [luequiv.haar_unitary(d, 10 + k) for k, d in enumerate(psi.dims)]
    phi = psi.apply_local_unitaries(us)
    assert close(luequiv.check_lu_fidelity(psi, phi, us), 1.0)
    for split in ("12-3", "13-2", "23-1"):
        v = luequiv.compare_fingerprints(luequiv.fingerprint(psi, split), luequiv.fingerprint(phi, split))
        assert v == "ConsistentGeneric", (split, v)

    lifted = luequiv.lift_witness(psi, phi, 2, us[:2])
    assert lifted.fidelity >= 1 - 1e-9

    one = psi.apply_on_party(1, us[1])
    wmat = luequiv.match_purification(psi, one, 1)
    assert abs(psi.apply_on_party(1, wmat).inner(one)) >= 1 - 1e-9

    found = luequiv.search_lu(luequiv.PureState.random([2, 2, 2], 1),
                              luequiv.PureState.random([2, 2, 2], 1).apply_local_unitaries(
                                  [luequiv.haar_unitary(2, s) for s in (1, 2, 3)]),
                              16, 0)
    assert found.fidelity >= 1 - 1e-6, found

    values, vectors = luequiv.hermitian_eig([[2, 1j], [-1j, 2]])
    assert close(values[0], 3) and close(values[1], 1)

    report = luequiv.counterexample_report()
    assert report.verdict == "NotUnitarilyEquivalent"
    assert max(report.reduced_residuals) <= 1e-12
    assert close(report.max_spectral_gap, 1 / 6)

    try:
        luequiv.PureState([2, 2], [1, 1, 0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("unnormalized state accepted")

    assert math.isclose(abs(w.inner(ghz)), 0.0)
    print("smoke test passed")


if __name__ == "__main__":
    main()
