from setuptools import find_packages, setup

setup(
    name="sbo-workbench",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "sympy>=1.12",  # Exact rational fields, polynomial rings, DomainMatrix nullspaces
        "mpmath>=1.3.0",  # Numeric Gamma values and quadrature for the probes
        "pydantic>=2.5.0",
        "python-dotenv>=1.0.0",  # .env support for the report directory
    ],
    entry_points={
        "console_scripts": [
            "sbo-workbench=sbo_workbench.cli:main",
        ],
    },
    description="SBO Workbench - exact symmetry-breaking operators for (GL_{n+1}, GL_n)",
    author="SBO Workbench Team",
)
