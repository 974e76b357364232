#pragma once

#include <string>

#include "teamlogic/formula.hpp"

namespace teamlogic {

std::string pretty_print(const Term& t);
std::string pretty_print(const Tuple& t);   // "[t1,t2]"
std::string pretty_print(const Formula& f);
std::string pretty_print(const FormulaPtr& f);
std::string pretty_print(const EsoFormula& phi);

}  // namespace teamlogic
