"""
Cross-checks
============

Every closed form in the package has an independent numerical route.  The
validation suites run both on random and boundary configurations and print
the worst residual found.
"""

from duality_lab.validation import run_all

for result in run_all(seed=11):
    print(result.line())
