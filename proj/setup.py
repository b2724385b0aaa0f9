import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        # get_ext_fullpath ends in adaprox/_core<suffix>; the CMake install
        # step places the module under <prefix>/adaprox, so the prefix is the
        # directory two levels up from the extension file.
        prefix = Path(self.get_ext_fullpath(ext.name)).resolve().parent.parent

        configure = [
            "cmake",
            "-S",
            str(source_dir),
            "-B",
            str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DSKBUILD=ON",
            "-DADAPROX_BUILD_CLI=OFF",
            "-DADAPROX_BUILD_TESTS=OFF",
            f"-DPython3_EXECUTABLE={sys.executable}",
        ]
        build = [
            "cmake",
            "--build",
            str(build_dir),
            "--target",
            "_core",
            "--parallel",
            str(os.cpu_count() or 2),
        ]
        install = ["cmake", "--install", str(build_dir), "--prefix", str(prefix)]

        for command in (configure, build, install):
            subprocess.run(command, check=True)


setup(
    ext_modules=[CMakeExtension("adaprox._core")],
    cmdclass={"build_ext": CMakeBuild},
)
