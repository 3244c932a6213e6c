#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "zlab/numeric.hpp"

int main(int argc, char** argv) {
  zlab::set_real_precision_bits(200);
  return doctest::Context(argc, argv).run();
}
