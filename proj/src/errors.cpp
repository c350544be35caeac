#include "corrprod/errors.hpp"

namespace corrprod {

void throw_domain(const std::string& what) { throw DomainError(what); }
void throw_convergence(const std::string& what) { throw ConvergenceError(what); }
void throw_precondition(const std::string& what) { throw PreconditionError(what); }

} // namespace corrprod
