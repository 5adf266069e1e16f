#include "fraclimit/version.hpp"

#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>

#ifndef FRACLIMIT_VERSION
#define FRACLIMIT_VERSION "unknown"
#endif

namespace fraclimit {

std::string version() { return FRACLIMIT_VERSION; }

std::string backend_versions() {
    std::ostringstream out;
#if defined(__clang__)
    out << "compiler=clang " << __clang_major__ << "." << __clang_minor__ << "." << __clang_patchlevel__;
#elif defined(__GNUC__)
    out << "compiler=gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "." << __GNUC_PATCHLEVEL__;
#else
    out << "compiler=unknown";
#endif
    out << "; boost=" << BOOST_VERSION / 100000 << "." << BOOST_VERSION / 100 % 1000 << "." << BOOST_VERSION % 100;
    out << "; eigen=" << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION;
    out << "; fftw=" << fftw_version;
    return out.str();
}

}  // namespace fraclimit
