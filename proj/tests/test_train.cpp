#include <doctest.h>

TEST_SUITE("train") {

}  // TEST_SUITE
