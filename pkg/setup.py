from setuptools import setup, find_packages

setup(
    name="pevcond",
    version="0.1.0",
    description="Real polynomial eigenvalues, their condition numbers and expected condition numbers",
    author="pevcond developers",
    packages=find_packages(where="src"),
    package_dir={"":"src"},
    install_requires=[
        "numpy>=1.20.0",
        "pandas>=1.3.0",
        "click>=8.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=6.2.5",
            "pytest-cov>=2.12.1",
        ],
        "dev": [
            "flake8>=3.9.0",
            "mypy>=0.812",
        ],
    },
    entry_points={
        "console_scripts": [
            "pevcond=pevcond.experiment.cli:main",
        ],
    },
    python_requires=">=3.8",
)
