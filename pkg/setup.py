# Root manifest: the package sources live under toolkit/ (see toolkit/setup.py)
from setuptools import find_packages, setup

setup(
    name='fracdisc',
    version='0.1.0',
    description='Discrete fractional calculus: Grünwald-Letnikov operators, '
                'fractional-order plants, PI^lambda D^delta controllers and feedback loops',
    package_dir={'': 'toolkit'},
    packages=find_packages(where='toolkit', exclude=['fracdisc.test']),
    package_data={'fracdisc': ['presets/*.ini']},
    python_requires='>=3.10',
    install_requires=[
        'Django>=4.2,<5',
        'djangorestframework>=3.14',
        'python-dotenv>=1.0',
        'numpy>=1.24',
        'scipy>=1.10',
    ],
    entry_points={
        'console_scripts': ['fracdisc=fracdisc.cli:main'],
    },
)
