"""Generate the H2/STO-3G Jordan-Wigner qubit Hamiltonian at a given bond length.

Usage: python3 tools/gen_h2.py [bond_angstrom] > data/h2_sto3g_1.1A.ham
Requires pyscf and numpy. Spin orbitals ordered (0 up, 0 down, 1 up, 1 down);
qubit k holds spin orbital k, occupation |1> means occupied.
"""
import itertools
import sys

import numpy as np
import pyscf
from pyscf import ao2mo, gto, scf

bond = float(sys.argv[1]) if len(sys.argv) > 1 else 1.1
mol = gto.M(atom=f"H 0 0 0; H 0 0 {bond}", basis="sto-3g", unit="Angstrom")
mf = scf.RHF(mol).run(verbose=0)
c = mf.mo_coeff
norb = c.shape[1]
h1 = c.T @ mf.get_hcore() @ c
eri = ao2mo.restore(1, ao2mo.kernel(mol, c), norb)  # chemist (pq|rs)
nso = 2 * norb

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
lower = np.array([[0.0, 1.0], [0.0, 0.0]])  # |1> -> |0>


def kron_all(ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


a = [kron_all([Z] * k + [lower] + [I2] * (nso - k - 1)) for k in range(nso)]
ad = [m.conj().T for m in a]
H = mol.energy_nuc() * np.eye(2**nso)
for p, q in itertools.product(range(nso), repeat=2):
    if p % 2 == q % 2:
        H = H + h1[p // 2, q // 2] * ad[p] @ a[q]
for p, q, r, s in itertools.product(range(nso), repeat=4):
    if p % 2 == s % 2 and q % 2 == r % 2:
        v = eri[p // 2, s // 2, q // 2, r // 2]
        if v != 0:
            H = H + 0.5 * v * ad[p] @ ad[q] @ a[r] @ a[s]

paulis = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": Z}
print(f"# H2 STO-3G, bond {bond} Angstrom, RHF orbitals (pyscf {pyscf.__version__}), Jordan-Wigner")
print("# spin-orbital order (0u,0d,1u,1d); constant term includes nuclear repulsion")
print(f"# E_HF = {mf.e_tot:.10f} Ha, exact ground energy = {np.linalg.eigvalsh(H)[0]:.10f} Ha")
for s in itertools.product("IXYZ", repeat=nso):
    P = kron_all([paulis[ch] for ch in s])
    coeff = np.trace(P @ H) / 2**nso
    if abs(coeff) > 1e-10:
        print(f"{coeff.real:.12f} {coeff.imag:.12f} {''.join(s)}")
