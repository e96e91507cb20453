"""
CompoundCert
~~~~~~~~~~~~
An example of how to use the CompoundCert package.
"""

# Import the CompoundCert package
import numpy as np
import CompoundCert as cc

# --------------------------------------------------------------------
# Compound matrices of a constant matrix
# --------------------------------------------------------------------
A: np.ndarray = np.array([[-1.0, 0.0, 2.0], [0.1, -1.0, 0.0], [0.0, 3.0, 1.0]])

print("A^(2) =\n", cc.mult_compound(A, 2).matrix)
print("A^[2] =\n", cc.add_compound(A, 2).matrix)
print("mu_1(A^[2]) =", cc.compound_measure(A, 2, cc.MeasureKind.L1))

# --------------------------------------------------------------------
# Define a callback function for the progress updates
# --------------------------------------------------------------------
def progress_callback(data: cc._ProgressData):
    if data.status in ('CERTIFIED', 'COMPLETED'):
        print(f"[{data.status}] {data.message}")

progress: cc.Progress = cc.Progress()
progress.add_progress_listener(progress_callback)

# --------------------------------------------------------------------
# Certify 2-positivity of the constant system
# --------------------------------------------------------------------
report: cc.CertReport = cc.certify_k_positive([(0.0, A)], 2, strong = True, progress = progress)
print(report.to_dict())

# --------------------------------------------------------------------
# Certify alpha-contraction of the Thomas system for alpha = 2.74
# --------------------------------------------------------------------
thomas: cc.SystemDef = cc.thomas_system(0.1)
samples = cc.jacobian_samples(thomas, cc.state_space_grid(thomas, 5))
report = cc.certify_alpha_contracting(samples, 2.74, cc.MeasureKind.L1, progress = progress)
print(report.verdict, report.margin, "(closed form:", -cc.thomas_alpha_bound(0.1, 0.74), ")")

# --------------------------------------------------------------------
# Run the golden-example suite
# --------------------------------------------------------------------
results = cc.run_selftest(progress)
print(sum(result["passed"] for result in results), "of", len(results), "checks passed")
