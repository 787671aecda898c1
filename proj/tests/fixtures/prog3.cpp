// Program 3: compare two integers (only the equality test is kept).
#include <iostream>
using namespace std;

int main ()
{
  int num1;
  int num2;
  cout << "Enter two integers\n";

  cin >> num1 >> num2;
  if (num1 == num2)
    cout << num1 << " is equal to " << num2 << endl;

  return 0;
}
