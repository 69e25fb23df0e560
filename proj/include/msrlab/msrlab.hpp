#pragma once

#include "msrlab/bounds.hpp"
#include "msrlab/certificates.hpp"
#include "msrlab/code.hpp"
#include "msrlab/codefile.hpp"
#include "msrlab/errors.hpp"
#include "msrlab/field.hpp"
#include "msrlab/matrix.hpp"
#include "msrlab/parallel.hpp"
#include "msrlab/repair.hpp"
#include "msrlab/search.hpp"
#include "msrlab/subspace.hpp"
