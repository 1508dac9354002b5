void f(int n, int x) {
    int i;
    i = 0;
    while (i < n) {
        i = i + 1;
        x = x + x;
    }
}
