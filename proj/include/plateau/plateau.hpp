#pragma once

// Everything at once.

#include "plateau/error.hpp"
#include "plateau/arith.hpp"
#include "plateau/parallel.hpp"
#include "plateau/ff.hpp"
#include "plateau/linalg.hpp"
#include "plateau/function.hpp"
#include "plateau/cyclotomic.hpp"
#include "plateau/walsh.hpp"
#include "plateau/forms.hpp"
#include "plateau/spectral_design.hpp"
#include "plateau/builders.hpp"
#include "plateau/analysis.hpp"
#include "plateau/io.hpp"
#include "plateau/jobs.hpp"
#include "plateau/corpus.hpp"
