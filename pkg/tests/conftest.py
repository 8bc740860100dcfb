"""Shared fixtures and independent brute-force oracles.

The helpers here deliberately avoid the package's own code paths: effects are
built from trigonometry, tables via explicit Kronecker products and traces,
and the state update via an eigendecomposition square root.  Tests compare
package output against these reference routes.
"""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def bf_nsigma(direction):
    nx, ny, nz = direction
    return nx * SX + ny * SY + nz * SZ


def bf_effect(direction, gamma):
    return (I2 + gamma * bf_nsigma(direction)) / 2


def bf_ab_effect(x, a):
    sigma = SZ if x == 0 else SX
    return (I2 + sigma) / 2 if a == 0 else (I2 - sigma) / 2


def bf_charlie_effect(theta, gamma, z, c):
    if z == 0:
        base = bf_effect((-np.sin(theta), 0.0, np.cos(theta)), 1.0)
    else:
        base = bf_effect((np.sin(theta), 0.0, np.cos(theta)), gamma)
    return base if c == 0 else I2 - base


def bf_gghz(alpha):
    psi = np.zeros(8, dtype=complex)
    psi[0] = np.cos(alpha)
    psi[7] = np.sin(alpha)
    return np.outer(psi, psi.conj())


def bf_behavior(rho, theta, gamma):
    """P(abc|xyz) by 64 explicit kron-and-trace evaluations."""
    probs = np.zeros((2, 2, 2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            for z in range(2):
                for a in range(2):
                    for b in range(2):
                        for c in range(2):
                            op = np.kron(
                                np.kron(bf_ab_effect(x, a), bf_ab_effect(y, b)),
                                bf_charlie_effect(theta, gamma, z, c),
                            )
                            probs[x, y, z, a, b, c] = np.trace(rho @ op).real
    return probs


def bf_sqrtm_psd(matrix):
    """Eigendecomposition square root; eigenvalues below 1e-13 count as zero."""
    vals, vecs = np.linalg.eigh(matrix)
    vals = np.where(vals < 1e-13, 0.0, vals)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def bf_luders(rho, theta, gamma):
    out = np.zeros_like(rho)
    for z in range(2):
        for c in range(2):
            root = bf_sqrtm_psd(bf_charlie_effect(theta, gamma, z, c))
            k8 = np.kron(np.eye(4, dtype=complex), root)
            out += 0.5 * (k8 @ rho @ k8.conj().T)
    return out


def bf_corr2(probs, pair, i, j):
    total = 0.0
    for a in range(2):
        for b in range(2):
            for c in range(2):
                if pair == "AB":
                    total += (-1.0) ** (a + b) * probs[i, j, 0, a, b, c]
                elif pair == "AC":
                    total += (-1.0) ** (a + c) * probs[i, 0, j, a, b, c]
                elif pair == "BC":
                    total += (-1.0) ** (b + c) * probs[0, i, j, a, b, c]
    return total


def bf_corr3(probs, x, y, z):
    total = 0.0
    for a in range(2):
        for b in range(2):
            for c in range(2):
                total += (-1.0) ** (a + b + c) * probs[x, y, z, a, b, c]
    return total


def bf_ns2(probs):
    return (
        bf_corr2(probs, "AB", 0, 0)
        + bf_corr2(probs, "AC", 0, 0)
        + bf_corr2(probs, "BC", 0, 1)
        - bf_corr3(probs, 1, 1, 0)
        + bf_corr3(probs, 1, 1, 1)
    )


def bf_closed_form(k, alpha, theta, gammas):
    base = np.cos(theta) + np.sin(theta) * np.sin(2 * alpha)
    if k == 1:
        return 1 + (1 + gammas[0]) * base
    prod = 1.0
    for g in gammas[:k - 1]:
        prod *= 1 + np.sqrt(1 - g * g)
    return 1 + base * (prod + gammas[k - 1]) / 2 ** (k - 1)


def random_density(rng, dim=8):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
