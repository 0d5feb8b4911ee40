from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("zenocoupler._genapply", ["src/zenocoupler/_genapply.pyx"])],
        language_level="3",
    )
except ImportError:
    # Pure-Python fallback kernel is used when the extension is unavailable.
    extensions = []

setup(ext_modules=extensions)
