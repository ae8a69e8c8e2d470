"""Set up the Sinai walk lab."""
from setuptools import setup, find_packages

setup(
    name='sinai_lab',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    python_requires='>=3.10',
    install_requires=[
        'colorlog==6.7.0',
        'deepmerge==1.1.1',
        'numpy>=1.26,<3',
        'pydantic==2.6.3',
        'scipy>=1.11',
        'voluptuous==0.13.1',
    ],
    entry_points={
        'console_scripts': [
            'sinai-lab=sinai_lab.cli:main',
        ],
    },
)
