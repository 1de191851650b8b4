from setuptools import find_packages, setup

from skylink import __version__

with open("requirements.txt", encoding="utf-8") as f:
    requirements = [line.strip() for line in f if line.strip() and not line.startswith(("#", "pytest"))]

setup(
    name="skylink",
    version=__version__,
    description="Skies of spacetime events as Legendrian links, with causality and generating-function checks",
    packages=find_packages(exclude=("tests",)),
    package_data={"skylink": ["data/scenarios/*.json"]},
    python_requires=">=3.10",
    install_requires=requirements,
    entry_points={"console_scripts": ["skylink=skylink.cli:main"]},
)
