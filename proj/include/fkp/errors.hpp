#ifndef FKP_ERRORS_HPP
#define FKP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fkp {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failures: missing files, unreadable paths, short writes.
struct IoError : Error {
    using Error::Error;
};

// Structurally invalid file contents: bad magic, bad dimensions, truncated payload.
struct FormatError : Error {
    using Error::Error;
};

// Violated call contracts: dimension mismatches, empty point sets, bad parameters.
struct InvalidArgument : Error {
    using Error::Error;
};

// Gallery-level problems: duplicate keys, inconsistent templates, empty gallery.
struct GalleryError : Error {
    using Error::Error;
};

}  // namespace fkp

#endif
