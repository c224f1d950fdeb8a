#pragma once

#include "twistcoh/error.hpp"
#include "twistcoh/setup.hpp"
#include "twistcoh/path.hpp"
#include "twistcoh/branch.hpp"
#include "twistcoh/chain.hpp"
#include "twistcoh/form.hpp"
#include "twistcoh/quadrature.hpp"
#include "twistcoh/gamma.hpp"
#include "twistcoh/parallel.hpp"
#include "twistcoh/cohomology.hpp"
#include "twistcoh/varchenko.hpp"
#include "twistcoh/poincare.hpp"
#include "twistcoh/gauss_manin.hpp"
#include "twistcoh/io.hpp"
#include "twistcoh/diagram.hpp"
