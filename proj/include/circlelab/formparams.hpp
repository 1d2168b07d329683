#ifndef CIRCLELAB_FORMPARAMS_HPP
#define CIRCLELAB_FORMPARAMS_HPP

#include "circlelab/errors.hpp"

namespace circlelab {

// The pair (k, d) defining the diagonal form |x_1|^k + ... + |x_d|^k.
// k = 2 is allowed so exact oracles can cross-check against closed forms.
struct FormParams {
    int k = 3;  // degree >= 2
    int d = 1;  // dimension >= 1

    void validate() const {
        if (k < 2) throw precondition_error("FormParams: degree k must be >= 2");
        if (d < 1) throw precondition_error("FormParams: dimension d must be >= 1");
    }
};

}

#endif
