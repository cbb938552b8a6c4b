from setuptools import setup

requires = [
    "jsonschema>=3.0",
    "sympy>=1.5",
    "networkx>=2.4",
    "numpy>=1.17",
]

test_requires = [
    "pytest>=6.0",
    "hypothesis>=5.0",
]

package_version = "0.1.0"


def read(f):
    return open(f, encoding="utf-8").read()


setup(
    name="nflab",
    description="Exact No-Free-Lunch verification on finite search spaces",
    long_description=read("README.md"),
    long_description_content_type="text/markdown",
    packages=["nflab"],
    package_data={"nflab": ["py.typed"]},
    version=package_version,
    install_requires=requires,
    extras_require={"test": test_requires},
    python_requires=">=3.8",
    entry_points={"console_scripts": ["nflab=nflab.cli:main"]},
    license="MIT",
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
