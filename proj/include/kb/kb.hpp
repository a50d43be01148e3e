#pragma once

#include "acceptance.hpp"
#include "circle.hpp"
#include "clark.hpp"
#include "error.hpp"
#include "factorization.hpp"
#include "gaussian.hpp"
#include "job.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "random.hpp"
#include "report.hpp"
#include "rkhs.hpp"
#include "run.hpp"
