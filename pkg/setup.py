"""Build hook for the optional compiled kernels.

The package works without them: if Cython or a C compiler is missing, the
extension is skipped and ``weilforge.kernels`` falls back to pure Python.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001  (any toolchain failure)
            print(f'warning: compiled kernels not built ({exc}); using pure Python', file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f'warning: {ext.name} not built ({exc}); using pure Python', file=sys.stderr)


def extensions():
    if os.environ.get('WEILFORGE_PURE', '') in ('1', 'true', 'yes'):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension('weilforge._ckernels', ['src/weilforge/_ckernels.pyx'],
                    extra_compile_args=['-O3'])
    return cythonize([ext], compiler_directives={'language_level': '3'}, quiet=True)


setup(ext_modules=extensions(), cmdclass={'build_ext': OptionalBuildExt})
