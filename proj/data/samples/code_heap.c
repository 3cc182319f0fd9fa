#include <stdio.h>

static void sift_down(int *a, int start, int end) {
    int root = start;
    while (2 * root + 1 <= end) {
        int child = 2 * root + 1;
        int swap = root;
        if (a[swap] < a[child]) swap = child;
        if (child + 1 <= end && a[swap] < a[child + 1]) swap = child + 1;
        if (swap == root) return;
        int tmp = a[root];
        a[root] = a[swap];
        a[swap] = tmp;
        root = swap;
    }
}

void heap_sort(int *a, int n) {
    for (int start = (n - 2) / 2; start >= 0; --start) sift_down(a, start, n - 1);
    for (int end = n - 1; end > 0; --end) {
        int tmp = a[end];
        a[end] = a[0];
        a[0] = tmp;
        sift_down(a, 0, end - 1);
    }
}

int main(void) {
    int a[] = {5, 3, 8, 1, 9, 2, 7, 4, 6, 0};
    heap_sort(a, 10);
    for (int i = 0; i < 10; ++i) printf("%d ", a[i]);
    printf("\n");
    return 0;
}
