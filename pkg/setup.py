from pathlib import Path
from setuptools import find_packages, setup

# Load version number
__version__ = ""
version_file = Path(__file__).parent.absolute() / "hhgeom" / "_version.py"

with open(version_file) as fd:
    exec(fd.read())

# Load README
with open("README.md", encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="hhgeom",
    version=__version__,
    description="Numerical verification of Hermite-Hadamard-type inequalities on convex polytopes",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    packages=find_packages(exclude=["tests"]),
    package_data={"hhgeom": ["py.typed"]},
    entry_points={
        "console_scripts": [
            "hhgeom=hhgeom.cli:hhgeom_command_line",
        ]
    },
    install_requires=[
        "numpy",
        "pandas>=2.0.0",
        "scipy>=1.10.0",
        "tqdm",
        "typed-argument-parser>=1.9.0",
    ],
    extras_require={
        "plot": ["matplotlib", "seaborn"],
        "test": ["pytest"],
    },
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Typing :: Typed",
    ],
    keywords=[
        "convex geometry",
        "polytopes",
        "Hermite-Hadamard inequality",
        "sections and projections",
        "Monte Carlo integration",
    ],
)
