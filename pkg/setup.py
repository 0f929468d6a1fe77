#!/usr/bin/env python3
"""Setup weylscope."""

import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

exec(open("weylscope/__version__.py").read())

req_pkgs = [
    'numpy>=1.22',
    'scipy>=1.8',
    'colorama',
    'pyxdg',
    'simber==0.2.6',
    'rich',
]


extra_features = {
    'test': ['pytest']
}


if __name__ == '__main__':
    setuptools.setup(
        name="weylscope",
        version=__version__,
        description="Weyl functions and high energy asymptotics for "
                    "Schrodinger operators with measure valued potentials",
        long_description=long_description,
        long_description_content_type="text/markdown",
        packages=setuptools.find_packages(exclude=("tests",)),
        classifiers=(
            "Programming Language :: Python :: 3",
            "License :: OSI Approved :: MIT License",
            "Operating System :: OS Independent",
            "Environment :: Console",
            "Topic :: Scientific/Engineering :: Mathematics",
            "Topic :: Scientific/Engineering :: Physics",
        ),
        python_requires=">=3.8",
        install_requires=req_pkgs,
        extras_require=extra_features,
        entry_points={
            'console_scripts': [
                "weylscope = weylscope:entry"
            ]
        },
    )
