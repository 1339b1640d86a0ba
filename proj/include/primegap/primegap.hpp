#pragma once

#include "primegap/error.hpp"
#include "primegap/primes.hpp"
#include "primegap/graph.hpp"
#include "primegap/vizing.hpp"
#include "primegap/degseq.hpp"
#include "primegap/matching.hpp"
#include "primegap/oracle.hpp"
#include "primegap/verify.hpp"
#include "primegap/dpg.hpp"
#include "primegap/io.hpp"
