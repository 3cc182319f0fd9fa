#include <stdio.h>

long gcd(long a, long b) {
    while (b != 0) {
        long t = b;
        b = a % b;
        a = t;
    }
    return a;
}

long lcm(long a, long b) { return a / gcd(a, b) * b; }

int main(void) {
    long pairs[][2] = {{12, 18}, {35, 49}, {100, 75}, {17, 13}};
    for (int i = 0; i < 4; ++i) {
        long a = pairs[i][0], b = pairs[i][1];
        printf("gcd(%ld,%ld)=%ld lcm=%ld\n", a, b, gcd(a, b), lcm(a, b));
    }
    return 0;
}
