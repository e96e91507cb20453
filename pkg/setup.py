from setuptools import setup

with open("README.md", "r", encoding="utf-8") as fh:
   long_description = fh.read()

setup(
   name='CompoundCert',
   version='1.0.0',
   description='CompoundCert computes multiplicative, additive and alpha compound matrices and certifies k-contraction, k-positivity and k-cooperativity of linear time-varying and nonlinear systems.',
   long_description=long_description,
   long_description_content_type="text/markdown",
   python_requires='>=3.12',
   licence='MIT',
   packages=['CompoundCert'],
   install_requires=["numpy", "scipy"],
   extras_require={"test": ["pytest"]},
   entry_points={"console_scripts": ["compoundcert=CompoundCert.CLI:main"]}
)
