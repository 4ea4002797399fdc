#ifndef PLG_ERROR_HPP
#define PLG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace plg {

// Failure categories surfaced to callers.  Check routines report
// mathematical failures (an axiom that does not hold) through their result
// structs; exceptions are reserved for inputs or requests that make the
// computation itself meaningless.
enum class Errc {
  invalid_input,         // malformed file / encoding contract broken
  precondition,          // operation called outside its stated domain
  cap_exceeded,          // enumeration would exceed the configured cap
  construction_failure,  // geometric construction broke down (e.g. missing
                         // intersection point while building a collineation)
  oracle_inconsistent,   // black-box oracle gave answers no form can explain
  internal,              // invariant of the library itself violated
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace plg

#endif
