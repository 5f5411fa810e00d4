#include "dualmink/tolerances.hpp"

namespace dualmink {

Tolerances& tolerances() {
    static Tolerances instance;
    return instance;
}

} // namespace dualmink
