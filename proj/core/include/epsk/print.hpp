// Pretty-printing in the ASCII concrete syntax accepted by the parser.

#ifndef EPSK_PRINT_HPP
#define EPSK_PRINT_HPP

#include <string>
#include <vector>

#include "epsk/syntax.hpp"

namespace epsk {

std::string printTerm(const Term& t);
std::string printFormula(const Formula& f);
std::string printSignature(const Signature& sig);

/// "H1, H2 |- C"
std::string printSequent(const std::vector<Formula>& hypotheses, const Formula& conclusion);

}  // namespace epsk

#endif  // EPSK_PRINT_HPP
