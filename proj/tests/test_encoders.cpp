#include <doctest.h>

TEST_SUITE("encoders") {

}  // TEST_SUITE
