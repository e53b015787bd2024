"""Setup configuration for the stc-ris package."""

from setuptools import find_packages, setup

setup(
    name="stc-ris",
    version="1.0.0",
    description="Space-time coded RIS simulator and design toolkit",
    packages=find_packages(include=["stc_ris", "stc_ris.*"]),
    package_data={"stc_ris": ["configs/*.json"]},
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "pydantic>=2.5",
    ],
    extras_require={"monitoring": ["psutil>=5.9.0"]},
    entry_points={
        "console_scripts": [
            "stc-ris=stc_ris.cli:run_main",
        ],
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
    ],
    python_requires=">=3.10",
)
